#pragma once

#include <string>
#include <vector>

#include "stt/session.hpp"

namespace stt {

struct ManifestEntry {
  bool expectChecks = true;
  std::string failCategory;  // when !expectChecks
  std::string path;          // resolved against the manifest directory
  std::string anchor;
};

std::vector<ManifestEntry> parseManifest(const std::string& manifestPath);

struct CorpusReport {
  std::vector<std::string> lines;
  int files = 0;
  int mismatches = 0;

  std::string render() const;
};

// Check every manifest entry in order. CHECKS files accumulate into one shared
// environment; FAILS files run against a scratch copy and must fail with the
// expected category.
CorpusReport runCorpus(const std::string& manifestPath, bool distinctEndpoints = true);

}  // namespace stt
