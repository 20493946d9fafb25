#include "stt/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace stt {

std::vector<ManifestEntry> parseManifest(const std::string& manifestPath) {
  std::ifstream in(manifestPath);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifestPath);
  auto baseDir = std::filesystem::path(manifestPath).parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
      trimmed.pop_back();
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::istringstream ss(trimmed);
    std::string kw, expectation, path;
    ss >> kw >> expectation >> path;
    if (kw != "EXPECT" || path.empty())
      throw std::runtime_error(manifestPath + ":" + std::to_string(lineno) +
                               ": malformed manifest line");
    ManifestEntry e;
    if (expectation == "CHECKS") {
      e.expectChecks = true;
    } else if (expectation.rfind("FAILS:", 0) == 0) {
      e.expectChecks = false;
      e.failCategory = expectation.substr(6);
      if (!categoryFromName(e.failCategory))
        throw std::runtime_error(manifestPath + ":" + std::to_string(lineno) +
                                 ": unknown error category " + e.failCategory);
    } else {
      throw std::runtime_error(manifestPath + ":" + std::to_string(lineno) +
                               ": expected CHECKS or FAILS:<category>");
    }
    std::string rest;
    std::getline(ss, rest);
    auto pos = rest.find("--");
    if (pos != std::string::npos) {
      e.anchor = rest.substr(pos + 2);
      while (!e.anchor.empty() && e.anchor.front() == ' ') e.anchor.erase(0, 1);
    }
    e.path = (baseDir / path).string();
    out.push_back(std::move(e));
  }
  return out;
}

std::string CorpusReport::render() const {
  std::ostringstream os;
  for (const auto& l : lines) os << l << "\n";
  os << "corpus: " << files << " file(s), " << mismatches << " mismatch(es)\n";
  return os.str();
}

CorpusReport runCorpus(const std::string& manifestPath, bool distinctEndpoints) {
  auto entries = parseManifest(manifestPath);
  auto baseDir = std::filesystem::path(manifestPath).parent_path();
  CorpusReport report;
  Session main(distinctEndpoints);
  for (const auto& e : entries) {
    ++report.files;
    std::string shown = std::filesystem::path(e.path)
                            .lexically_relative(baseDir)
                            .generic_string();
    if (shown.empty()) shown = e.path;
    if (e.expectChecks) {
      main.clearOutput();
      bool ok = main.checkFile(e.path);
      if (ok) {
        report.lines.push_back("PASS " + shown + " (CHECKS)");
      } else {
        ++report.mismatches;
        std::string why = main.diagnostics().empty()
                              ? "unknown error"
                              : main.diagnostics().front().render();
        report.lines.push_back("FAIL " + shown + ": expected CHECKS, got: " + why);
      }
    } else {
      Session scratch(distinctEndpoints);
      scratch.env() = main.env();
      bool ok = scratch.checkFile(e.path);
      std::string got;
      if (ok) {
        got = "CHECKS";
      } else if (!scratch.diagnostics().empty()) {
        got = scratch.diagnostics().front().category;
      } else {
        got = "unknown";
      }
      if (!ok && got == e.failCategory) {
        report.lines.push_back("PASS " + shown + " (FAILS:" + e.failCategory + ")");
      } else {
        ++report.mismatches;
        report.lines.push_back("FAIL " + shown + ": expected FAILS:" + e.failCategory +
                               ", got " + got);
      }
    }
  }
  return report;
}

}  // namespace stt
