#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tplreach/callgraph.hpp"
#include "tplreach/hierarchy.hpp"
#include "tplreach/model.hpp"

namespace tplreach {

enum class Provenance { DeveloperTests, ScenarioRun };
std::string_view to_string(Provenance p);

class FormatError : public std::runtime_error {
 public:
  FormatError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Line hit counts per source file.
class CoverageMap {
 public:
  using FileHits = std::map<std::string, std::map<int, std::uint64_t>, std::less<>>;

  explicit CoverageMap(Provenance provenance = Provenance::DeveloperTests) : provenance_(provenance) {}

  Provenance provenance() const { return provenance_; }
  const FileHits& files() const { return files_; }

  void add(const std::string& file, int line, std::uint64_t hits);
  std::uint64_t hits(std::string_view file, int line) const;
  bool covered(std::string_view file, int line) const { return hits(file, line) > 0; }
  bool any_covered(std::string_view file, const LineRange& range) const;

  /// Sum of both maps; keeps this map's provenance.
  CoverageMap merged(const CoverageMap& other) const;

  bool operator==(const CoverageMap&) const = default;

 private:
  Provenance provenance_;
  FileHits files_;
};

/// LCOV subset: `SF:`, `DA:<line>,<hits>[,checksum]`, `end_of_record`. Other
/// record kinds are ignored; repeated files sum their hits. Throws FormatError.
CoverageMap parse_lcov(std::string_view text, Provenance provenance = Provenance::DeveloperTests);
std::string to_lcov(const CoverageMap& map);

struct CoverageVerdict {
  CallSiteRef site;
  bool covered = false;
  Provenance evidence = Provenance::DeveloperTests;
};

/// File holding a method's source, or nullopt for unknown/dependency methods.
std::optional<std::string> file_of_method(const ProjectModel& model, std::string_view method_id);

/// One verdict per site: covered iff the caller's file has hits on the site line.
std::vector<CoverageVerdict> covered_sites(const CoverageMap& map, const std::vector<TplCallSite>& sites,
                                           const ProjectModel& model);
bool site_covered(const CoverageMap& map, const CallSiteRef& site, const ProjectModel& model);

struct HopCoverage {
  std::string method_id;
  bool reached = false;
};

struct DivergenceReport {
  std::vector<HopCoverage> hops;
  // Index of the first unreached hop; hops.size() means every hop ran but the
  // target line did not.
  std::optional<std::size_t> divergence;
  bool target_reached = false;

  /// "covered hops: a, b; diverged at: c" (or "target line" / "none").
  std::string render() const;
};

DivergenceReport divergence_report(const CoverageMap& map, const CallPath& path, const ProjectModel& model);

}  // namespace tplreach
