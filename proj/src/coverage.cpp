#include "tplreach/coverage.hpp"

#include <charconv>
#include <sstream>

namespace tplreach {

std::string_view to_string(Provenance p) {
  return p == Provenance::DeveloperTests ? "developer_tests" : "scenario_run";
}

void CoverageMap::add(const std::string& file, int line, std::uint64_t hits) {
  files_[file][line] += hits;
}

std::uint64_t CoverageMap::hits(std::string_view file, int line) const {
  auto f = files_.find(file);
  if (f == files_.end()) return 0;
  auto l = f->second.find(line);
  return l == f->second.end() ? 0 : l->second;
}

bool CoverageMap::any_covered(std::string_view file, const LineRange& range) const {
  auto f = files_.find(file);
  if (f == files_.end()) return false;
  for (auto it = f->second.lower_bound(range.start); it != f->second.end() && it->first <= range.end; ++it)
    if (it->second > 0) return true;
  return false;
}

CoverageMap CoverageMap::merged(const CoverageMap& other) const {
  CoverageMap out = *this;
  for (const auto& [file, lines] : other.files_)
    for (const auto& [line, hits] : lines) out.add(file, line, hits);
  return out;
}

namespace {

template <typename T>
bool parse_number(std::string_view text, T& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

CoverageMap parse_lcov(std::string_view text, Provenance provenance) {
  CoverageMap map(provenance);
  std::optional<std::string> current;
  int line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.starts_with("SF:")) {
      if (line.size() == 3) throw FormatError(line_no, "SF record without a path");
      current = std::string(line.substr(3));
    } else if (line.starts_with("DA:")) {
      if (!current) throw FormatError(line_no, "DA record outside an SF section");
      auto body = line.substr(3);
      auto comma = body.find(',');
      if (comma == std::string_view::npos) throw FormatError(line_no, "DA record needs '<line>,<hits>'");
      auto hits_text = body.substr(comma + 1);
      if (auto second = hits_text.find(','); second != std::string_view::npos)
        hits_text = hits_text.substr(0, second);  // optional checksum
      int lineno = 0;
      std::uint64_t hits = 0;
      if (!parse_number(body.substr(0, comma), lineno) || lineno < 1)
        throw FormatError(line_no, "invalid line number in DA record");
      if (!parse_number(hits_text, hits)) throw FormatError(line_no, "invalid hit count in DA record");
      map.add(*current, lineno, hits);
    } else if (line == "end_of_record") {
      current.reset();
    }
  }
  return map;
}

std::string to_lcov(const CoverageMap& map) {
  std::ostringstream out;
  for (const auto& [file, lines] : map.files()) {
    out << "SF:" << file << '\n';
    for (const auto& [line, hits] : lines) out << "DA:" << line << ',' << hits << '\n';
    out << "end_of_record\n";
  }
  return out.str();
}

std::optional<std::string> file_of_method(const ProjectModel& model, std::string_view method_id) {
  const auto* owner = model.owner_of(method_id);
  if (!owner || !owner->file) return std::nullopt;
  return owner->file;
}

bool site_covered(const CoverageMap& map, const CallSiteRef& site, const ProjectModel& model) {
  auto file = file_of_method(model, site.caller);
  return file && map.covered(*file, site.line);
}

std::vector<CoverageVerdict> covered_sites(const CoverageMap& map, const std::vector<TplCallSite>& sites,
                                           const ProjectModel& model) {
  std::vector<CoverageVerdict> out;
  out.reserve(sites.size());
  for (const auto& s : sites) {
    CallSiteRef ref{s.site.caller, s.index, s.site.line};
    out.push_back({ref, site_covered(map, ref, model), map.provenance()});
  }
  return out;
}

DivergenceReport divergence_report(const CoverageMap& map, const CallPath& path, const ProjectModel& model) {
  DivergenceReport report;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    const auto* method = model.find_method(path.hops[i]);
    auto file = file_of_method(model, path.hops[i]);
    bool reached = method && file && map.any_covered(*file, method->lines);
    report.hops.push_back({path.hops[i], reached});
    if (!reached && !report.divergence) report.divergence = i;
  }
  if (!report.divergence) {
    report.target_reached = site_covered(map, path.target_site, model);
    if (!report.target_reached) report.divergence = path.hops.size();
  }
  return report;
}

std::string DivergenceReport::render() const {
  std::string covered;
  for (const auto& h : hops) {
    if (!h.reached) continue;
    if (!covered.empty()) covered += ", ";
    covered += h.method_id;
  }
  if (covered.empty()) covered = "none";
  std::string where = "none";
  if (divergence) where = *divergence < hops.size() ? hops[*divergence].method_id : std::string("target line");
  return "covered hops: " + covered + "; diverged at: " + where;
}

}  // namespace tplreach
