#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stt/corpus.hpp"
#include "stt/printer.hpp"
#include "stt/session.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kTypeError = 1,
  kParseError = 2,
  kUsageError = 3,
  kCorpusMismatch = 4,
};

void emitDiagnostics(const stt::Session& session, bool json) {
  for (const auto& d : session.diagnostics())
    std::cerr << (json ? d.renderJson() : d.render()) << "\n";
}

std::vector<std::string> splitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stt - checker for a simplicial type theory"};
  app.require_subcommand(1);

  bool noDistinct = false;
  const char* kNoDistinctHelp = "drop the axiom that the interval endpoints differ";
  app.add_flag("--no-distinct-endpoints", noDistinct, kNoDistinctHelp);

  // check
  auto* cmdCheck = app.add_subcommand("check", "type check .stt files in order");
  std::vector<std::string> checkFiles;
  bool jsonDiag = false;
  std::string preludePath;
  cmdCheck->add_option("files", checkFiles, "files to check")->required();
  cmdCheck->add_flag("--json", jsonDiag, "emit diagnostics as JSON objects, one per line");
  cmdCheck->add_option("--prelude", preludePath, "prelude path for 'import prelude'");
  cmdCheck->add_flag("--no-distinct-endpoints", noDistinct, kNoDistinctHelp);

  // tope
  auto* cmdTope = app.add_subcommand("tope", "decide a tope sequent");
  std::string varsSpec, hypText, goalText;
  int oracleChain = 0;
  cmdTope->add_option("--vars", varsSpec, "comma-separated cube variables");
  cmdTope->add_option("--hyp", hypText, "hypothesis tope")->required();
  cmdTope->add_option("--goal", goalText, "goal tope")->required();
  cmdTope->add_option("--oracle", oracleChain,
                      "cross-check against finite chains up to this size");
  cmdTope->add_flag("--no-distinct-endpoints", noDistinct, kNoDistinctHelp);

  // normalize
  auto* cmdNorm = app.add_subcommand("normalize", "reduce an expression to weak head normal form");
  std::vector<std::string> normFiles;
  std::string exprText;
  cmdNorm->add_option("files", normFiles, "files providing the environment");
  cmdNorm->add_option("-e,--expr", exprText, "expression to normalize")->required();
  cmdNorm->add_option("--prelude", preludePath, "prelude path for 'import prelude'");
  cmdNorm->add_flag("--no-distinct-endpoints", noDistinct, kNoDistinctHelp);

  // pushout-product
  auto* cmdPo = app.add_subcommand("pushout-product",
                                   "pushout product of two shape inclusions");
  std::string jSpec, kSpec;
  cmdPo->add_option("j", jSpec, "first inclusion, e.g. \"{t : I | t === 0} <= {t : I | TOP}\"")
      ->required();
  cmdPo->add_option("k", kSpec, "second inclusion")->required();

  // corpus run
  auto* cmdCorpus = app.add_subcommand("corpus", "corpus operations");
  auto* cmdCorpusRun = cmdCorpus->add_subcommand("run", "run the corpus manifest");
  std::string manifestPath = "corpus/manifest.txt";
  cmdCorpusRun->add_option("--manifest", manifestPath, "manifest path");
  cmdCorpusRun->add_flag("--no-distinct-endpoints", noDistinct, kNoDistinctHelp);

  CLI11_PARSE(app, argc, argv);
  bool distinct = !noDistinct;

  try {
    if (*cmdCheck) {
      stt::Session session(distinct);
      if (!preludePath.empty()) session.setPreludePath(preludePath);
      bool anyFail = false;
      for (const auto& f : checkFiles) {
        if (!session.checkFile(f)) anyFail = true;
        for (const auto& line : session.directiveOutput()) std::cout << line << "\n";
        emitDiagnostics(session, jsonDiag);
        session.clearOutput();
      }
      if (session.hasParseError()) return kParseError;
      return anyFail ? kTypeError : kOk;
    }

    if (*cmdTope) {
      auto vars = splitCommas(varsSpec);
      stt::Solver solver(distinct);
      int n = static_cast<int>(vars.size());
      stt::TopePtr hyp, goal;
      try {
        hyp = stt::parseTopeText(hypText, vars);
        goal = stt::parseTopeText(goalText, vars);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
      }
      bool valid = solver.entails(n, hyp, goal);
      std::cout << (valid ? "VALID" : "INVALID") << "\n";
      if (oracleChain > 0) {
        bool oracleValid = solver.oracle(n, hyp, goal, oracleChain);
        bool agree = oracleValid == valid;
        std::cout << (agree ? "AGREE" : "DISAGREE") << "\n";
        if (!agree) return kCorpusMismatch;
      }
      return kOk;
    }

    if (*cmdNorm) {
      stt::Session session(distinct);
      if (!preludePath.empty()) session.setPreludePath(preludePath);
      for (const auto& f : normFiles) {
        if (!session.checkFile(f)) {
          emitDiagnostics(session, false);
          return session.hasParseError() ? kParseError : kTypeError;
        }
      }
      try {
        std::cout << stt::printExpr(session.reduceExpression(exprText)) << "\n";
      } catch (const stt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
      } catch (const stt::TypeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTypeError;
      }
      return kOk;
    }

    if (*cmdPo) {
      stt::Solver solver(distinct);
      try {
        auto [jSub, jSuper] = stt::parseInclusionText(jSpec);
        auto [kSub, kSuper] = stt::parseInclusionText(kSpec);
        stt::ShapeInclusion j =
            solver.mkInclusion(jSub.cubeVars, jSub.tope, jSuper.tope);
        stt::ShapeInclusion k =
            solver.mkInclusion(kSub.cubeVars, kSub.tope, kSuper.tope);
        stt::ShapeInclusion out = solver.pushoutProduct(j, k);
        int n = static_cast<int>(out.cubeVars.size());
        std::string vars = "[";
        for (std::size_t i = 0; i < out.cubeVars.size(); ++i) {
          if (i) vars += ", ";
          vars += out.cubeVars[i];
        }
        vars += "]";
        std::cout << "sub   = " << vars << " "
                  << stt::printTope(stt::reindexShapeTope(out.sub, n), out.cubeVars)
                  << "\n";
        std::cout << "super = " << vars << " "
                  << stt::printTope(stt::reindexShapeTope(out.super, n), out.cubeVars)
                  << "\n";
      } catch (const stt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
      } catch (const stt::ContextMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
      }
      return kOk;
    }

    if (*cmdCorpusRun) {
      stt::CorpusReport report = stt::runCorpus(manifestPath, distinct);
      std::cout << report.render();
      return report.mismatches == 0 ? kOk : kCorpusMismatch;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
