#include "tplreach/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

namespace tplreach {

std::string_view to_string(PromptMode mode) {
  switch (mode) {
    case PromptMode::BL1:
      return "BL1";
    case PromptMode::BL2:
      return "BL2";
    case PromptMode::Full:
      return "FULL";
  }
  return "FULL";
}

std::optional<PromptMode> parse_prompt_mode(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "BL1") return PromptMode::BL1;
  if (upper == "BL2") return PromptMode::BL2;
  if (upper == "FULL") return PromptMode::Full;
  return std::nullopt;
}

namespace {

struct Piece {
  std::string title;
  std::string text;
};

void render_pieces(std::ostringstream& out, const std::vector<Piece>& pieces) {
  for (const auto& p : pieces) {
    out << "### " << p.title << "\n```\n" << p.text;
    if (!p.text.empty() && p.text.back() != '\n') out << '\n';
    out << "```\n\n";
  }
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) +
         (!text.empty() && text.back() != '\n' ? 1 : 0);
}

// Keeps the first half of the lines and records how many were dropped.
bool halve(std::string& text) {
  auto lines = split_lines(text);
  std::size_t dropped_before = 0;
  if (!lines.empty() && lines.back().starts_with("//[[") && lines.back().ends_with(" more lines truncated]]")) {
    dropped_before = std::stoul(lines.back().substr(4));
    lines.pop_back();
  }
  if (lines.size() < 2) return false;
  std::size_t keep = lines.size() / 2;
  std::size_t dropped = lines.size() - keep + dropped_before;
  std::string out;
  for (std::size_t i = 0; i < keep; ++i) out += lines[i] + "\n";
  out += "//[[" + std::to_string(dropped) + " more lines truncated]]\n";
  text = std::move(out);
  return true;
}

std::string render(const ContextBundle& bundle, const PromptConfig& config,
                   const std::optional<std::string>& feedback, const std::vector<Piece>& hops,
                   const std::vector<Piece>& instantiation) {
  const auto& path = bundle.path;
  std::ostringstream out;
  out << "Write a reachability scenario: a test-style code snippet that sets up the project state "
         "and executes a project method so that the third-party library call site below runs.\n\n";

  out << "## Target\n";
  out << "Third-party method: " << path.target << "\n";
  out << "Direct caller: " << path.direct_caller << "\n";
  out << "Call site line: " << path.target_site.line << "\n\n";

  out << "## Rules\n";
  for (auto rule : kScenarioInstructions) out << "- " << rule << "\n";
  out << "\n";

  if (config.mode == PromptMode::BL1) {
    out << "## Direct caller source\n";
    render_pieces(out, {hops.back()});
  } else {
    out << "## Call path\n";
    for (std::size_t i = 0; i < path.hops.size(); ++i) {
      out << i + 1 << ". " << path.hops[i];
      if (i == 0) out << " (entry point)";
      if (i + 1 == path.hops.size()) out << " (direct caller)";
      out << "\n";
    }
    out << "-> " << path.target << " (third-party library)\n\n";
    out << "## Methods along the path\n";
    render_pieces(out, hops);
  }

  if (config.mode == PromptMode::Full) {
    const auto& e = bundle.entry;
    out << "## Entry-point context\n";
    if (!e.imports.empty()) {
      out << "### Imports\n";
      for (const auto& imp : e.imports) out << imp << "\n";
      out << "\n";
    }
    std::vector<Piece> ctor_pieces;
    std::vector<Piece> setter_pieces;
    for (const auto& p : instantiation) {
      if (p.title.starts_with("Setter")) setter_pieces.push_back(p);
      else ctor_pieces.push_back(p);
    }
    if (!ctor_pieces.empty()) {
      out << "### Factory methods / Constructors\n\n";
      render_pieces(out, ctor_pieces);
    }
    if (!setter_pieces.empty()) {
      out << "### Setters\n\n";
      render_pieces(out, setter_pieces);
    }
    if (!e.fields.empty()) {
      out << "### Fields\n";
      for (const auto& f : e.fields) out << f << "\n";
      out << "\n";
    }
    for (const auto& note : bundle.notes) out << "Note: " << note << "\n";
    if (!bundle.notes.empty()) out << "\n";

    if (feedback && !feedback->empty()) {
      out << "## Feedback from the previous attempt\n" << *feedback;
      if (feedback->back() != '\n') out << '\n';
      out << "\n";
    }
  }

  out << "Return only the complete scenario source code.\n";
  return out.str();
}

}  // namespace

std::string build_prompt(const ContextBundle& bundle, const PromptConfig& config,
                         const std::optional<std::string>& feedback) {
  std::vector<Piece> hops;
  for (const auto& s : bundle.snippets) hops.push_back({s.method_id, s.text});
  if (hops.empty()) hops.push_back({bundle.path.direct_caller, "// source unavailable\n"});

  std::vector<Piece> instantiation;
  if (config.mode == PromptMode::Full) {
    for (std::size_t i = 0; i < bundle.entry.constructors.size(); ++i)
      instantiation.push_back({"Constructor " + std::to_string(i + 1), bundle.entry.constructors[i]});
    for (std::size_t i = 0; i < bundle.entry.factories.size(); ++i)
      instantiation.push_back({"Factory method " + std::to_string(i + 1), bundle.entry.factories[i]});
    for (std::size_t i = 0; i < bundle.entry.setters.size(); ++i)
      instantiation.push_back({"Setter " + std::to_string(i + 1), bundle.entry.setters[i]});
  }

  std::string prompt = render(bundle, config, feedback, hops, instantiation);
  while (prompt.size() > config.max_prompt_chars) {
    // Only snippets that are actually rendered are candidates.
    std::vector<std::string*> candidates;
    if (config.mode == PromptMode::BL1) {
      candidates.push_back(&hops.back().text);
    } else {
      for (auto& p : hops) candidates.push_back(&p.text);
    }
    for (auto& p : instantiation) candidates.push_back(&p.text);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const std::string* a, const std::string* b) { return line_count(*a) > line_count(*b); });
    bool shrunk = false;
    for (auto* c : candidates) {
      if (halve(*c)) {
        shrunk = true;
        break;
      }
    }
    if (!shrunk) break;
    prompt = render(bundle, config, feedback, hops, instantiation);
  }
  return prompt;
}

}  // namespace tplreach
