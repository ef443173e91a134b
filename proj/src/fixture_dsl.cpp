#include "tplreach/fixture_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace tplreach {

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
  bool punct = false;
};

bool is_punct(char c) { return c == '{' || c == '}' || c == ',' || c == ';'; }

// Pulls `source <path> <<<` ... `>>>` blocks out of the text, blanking their
// lines so that token positions still refer to the original input.
std::vector<std::string> extract_sources(std::vector<std::string>& lines,
                                         std::map<std::string, std::string>& sources) {
  std::vector<std::string> out = lines;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line.compare(first, 7, "source ") != 0) continue;
    auto marker = line.rfind("<<<");
    if (marker == std::string::npos) continue;
    std::string path = line.substr(first + 7, marker - first - 7);
    path.erase(0, path.find_first_not_of(" \t"));
    path.erase(path.find_last_not_of(" \t") + 1);
    if (path.empty())
      throw ParseError(static_cast<int>(i + 1), static_cast<int>(first + 8), {"<path>"},
                       "source block needs a path");
    std::string body;
    std::size_t j = i + 1;
    bool closed = false;
    for (; j < lines.size(); ++j) {
      auto t = lines[j];
      t.erase(0, t.find_first_not_of(" \t"));
      t.erase(t.find_last_not_of(" \t") + 1);
      if (t == ">>>") {
        closed = true;
        break;
      }
      body += lines[j];
      body += '\n';
    }
    if (!closed)
      throw ParseError(static_cast<int>(lines.size()), 1, {"'>>>'"},
                       "unterminated source block for '" + path + "'");
    sources[path] = std::move(body);
    for (std::size_t k = i; k <= j; ++k) out[k].clear();
    i = j;
  }
  return out;
}

std::vector<Token> tokenize(const std::vector<std::string>& lines) {
  std::vector<Token> tokens;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '#' || (c == '/' && i + 1 < line.size() && line[i + 1] == '/')) break;
      Token tok{std::string(), static_cast<int>(ln + 1), static_cast<int>(i + 1), false};
      if (is_punct(c)) {
        tok.text = std::string(1, c);
        tok.punct = true;
        tokens.push_back(std::move(tok));
        ++i;
        continue;
      }
      int depth = 0;
      while (i < line.size()) {
        char d = line[i];
        if (d == '(') ++depth;
        if (d == ')') --depth;
        if (depth <= 0 && (std::isspace(static_cast<unsigned char>(d)) || is_punct(d))) break;
        tok.text += d;
        ++i;
      }
      if (depth > 0)
        throw ParseError(tok.line, tok.column, {"')'"}, "unbalanced parenthesis in '" + tok.text + "'");
      tokens.push_back(std::move(tok));
    }
  }
  return tokens;
}

struct PendingCall {
  std::string receiver;
  std::string target;
  int line;
  Dispatch dispatch;
  bool is_new;
  Token origin;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, int last_line)
      : tokens_(std::move(tokens)), last_line_(last_line) {}

  ModelData parse(std::map<std::string, std::string> sources) {
    ModelData data;
    data.sources = std::move(sources);
    while (!at_end()) {
      const Token& t = peek();
      if (t.text == "project") {
        next();
        data.project_id = expect_word("<project id>").text;
      } else if (t.text == "dependency") {
        next();
        DependencyDecl dep;
        dep.coordinate = expect_word("<coordinate>").text;
        dep.version = expect_word("<version>").text;
        if (!at_end() && (peek().text == "direct" || peek().text == "transitive"))
          dep.direct = next().text == "direct";
        if (!at_end() && !peek().punct && peek().line == t.line) dep.scope = next().text;
        data.dependencies.push_back(std::move(dep));
      } else if (t.text == "dep" || t.text == "class") {
        data.classes.push_back(parse_class());
      } else if (t.text == "}") {
        throw ParseError(t.line, t.column, {"'project'", "'dependency'", "'class'", "'dep'"},
                         "unbalanced '}'");
      } else {
        throw ParseError(t.line, t.column, {"'project'", "'dependency'", "'class'", "'dep'"},
                         "unexpected '" + t.text + "'");
      }
    }
    if (data.project_id.empty()) data.project_id = "fixture";
    resolve_receivers(data);
    return data;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  Token next() { return tokens_[pos_++]; }

  [[noreturn]] void fail_eof(std::vector<std::string> expected) const {
    throw ParseError(last_line_, 1, expected,
                     "unexpected end of input, expected " + describe_expected(expected));
  }

  Token expect_word(const std::string& what) {
    if (at_end()) fail_eof({what});
    const Token& t = peek();
    if (t.punct)
      throw ParseError(t.line, t.column, {what}, "expected " + what + ", found '" + t.text + "'");
    return next();
  }

  Token expect(const std::string& text) {
    if (at_end()) fail_eof({"'" + text + "'"});
    const Token& t = peek();
    if (t.text != text)
      throw ParseError(t.line, t.column, {"'" + text + "'"},
                       "expected '" + text + "', found '" + t.text + "'");
    return next();
  }

  ClassDecl parse_class() {
    ClassDecl cls;
    if (peek().text == "dep") {
      next();
      cls.is_project_class = false;
      if (!at_end() && peek().text != "class") cls.dependency = expect_word("<coordinate>").text;
    }
    expect("class");
    // Header words up to '{': name [: super{,super}] [in path]. A ':' may be
    // glued to either neighbour.
    std::vector<Token> header;
    while (!at_end() && peek().text != "{") {
      Token t = next();
      if (t.text == ",") continue;
      if (t.punct)
        throw ParseError(t.line, t.column, {"'{'"}, "unexpected '" + t.text + "' in class header");
      std::size_t start = 0;
      for (std::size_t i = 0; i <= t.text.size(); ++i) {
        if (i == t.text.size() || t.text[i] == ':') {
          if (i > start) header.push_back({t.text.substr(start, i - start), t.line, t.column, false});
          if (i < t.text.size()) header.push_back({":", t.line, t.column, true});
          start = i + 1;
        }
      }
    }
    if (at_end()) fail_eof({"'{'"});
    if (header.empty() || header[0].punct) {
      const Token& t = header.empty() ? peek() : header[0];
      throw ParseError(t.line, t.column, {"<class name>"}, "class needs a name");
    }
    cls.fq_name = header[0].text;
    std::size_t h = 1;
    if (h < header.size() && header[h].text == ":") {
      ++h;
      while (h < header.size() && header[h].text != "in") cls.supertypes.push_back(header[h++].text);
      if (cls.supertypes.empty()) {
        const Token& t = header[h - 1];
        throw ParseError(t.line, t.column, {"<supertype>"}, "':' must be followed by a supertype");
      }
    }
    if (h < header.size() && header[h].text == "in") {
      if (h + 1 >= header.size())
        throw ParseError(header[h].line, header[h].column, {"<path>"}, "'in' needs a path");
      cls.file = header[h + 1].text;
      h += 2;
    }
    if (h < header.size())
      throw ParseError(header[h].line, header[h].column, {"':'", "'in'", "'{'"},
                       "unexpected '" + header[h].text + "' in class header");
    if (cls.is_project_class && !cls.file) {
      std::string path = cls.fq_name;
      std::replace(path.begin(), path.end(), '.', '/');
      cls.file = path + ".src";
    }

    expect("{");
    while (true) {
      if (at_end()) fail_eof({"'}'"});
      const Token& t = peek();
      if (t.text == "}") {
        next();
        break;
      }
      if (t.text == ";") {
        next();
        continue;
      }
      if (t.text == "import") {
        next();
        cls.imports.push_back(expect_word("<import>").text);
      } else if (t.text == "field") {
        next();
        FieldDecl f;
        f.type = expect_word("<field type>").text;
        f.name = expect_word("<field name>").text;
        cls.fields.push_back(std::move(f));
      } else {
        cls.methods.push_back(parse_method(cls));
      }
    }
    return cls;
  }

  MethodDecl parse_method(const ClassDecl& cls) {
    MethodDecl m;
    m.visibility = cls.is_project_class ? Visibility::Package : Visibility::Public;
    std::optional<Token> sig;
    while (!at_end() && !sig) {
      const Token& t = peek();
      if (t.punct)
        throw ParseError(t.line, t.column, {"<method signature>"},
                         "expected a method signature, found '" + t.text + "'");
      if (auto vis = parse_visibility(t.text)) {
        m.visibility = *vis;
      } else if (t.text == "static") {
        m.is_static = true;
      } else if (t.text == "ctor") {
        m.is_constructor = true;
      } else if (t.text == "@factory") {
        m.is_factory = true;
        m.is_static = true;
      } else if (t.text == "@setter") {
        m.is_setter = true;
      } else if (t.text.find('(') != std::string::npos) {
        sig = t;
      } else {
        throw ParseError(t.line, t.column,
                         {"<modifier>", "<method signature>", "'import'", "'field'", "'}'"},
                         "unexpected '" + t.text + "' in class body");
      }
      next();
    }
    if (!sig) fail_eof({"<method signature>"});

    std::string text = sig->text;
    std::optional<LineRange> range;
    if (auto at = text.rfind('@'); at != std::string::npos && text.find(')') < at) {
      range = parse_range(text.substr(at + 1), *sig);
      text.erase(at);
    } else if (!at_end() && !peek().punct && peek().text.starts_with("@") &&
               peek().text.size() > 1 && std::isdigit(static_cast<unsigned char>(peek().text[1]))) {
      Token r = next();
      range = parse_range(r.text.substr(1), r);
    }
    if (text.empty() || text.front() == '(' || text.back() != ')')
      throw ParseError(sig->line, sig->column, {"name(params)"},
                       "malformed method signature '" + sig->text + "'");
    m.id = cls.fq_name + "." + text;

    int first_line = sig->line;
    int last_line = sig->line;
    if (!at_end() && peek().text == "{") {
      next();
      while (true) {
        if (at_end()) fail_eof({"'call'", "'}'"});
        if (peek().text == "}") {
          last_line = next().line;
          break;
        }
        if (peek().text == ";") {
          next();
          continue;
        }
        m.calls.push_back(parse_call(m.id));
      }
    }
    if (range) {
      m.lines = *range;
    } else {
      m.lines = {first_line, last_line};
      for (const auto& c : m.calls) {
        m.lines.start = std::min(m.lines.start, c.line);
        m.lines.end = std::max(m.lines.end, c.line);
      }
    }
    return m;
  }

  LineRange parse_range(const std::string& text, const Token& at) {
    auto dash = text.find('-');
    auto digits = [](std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (dash == std::string::npos || !digits(text.substr(0, dash)) || !digits(text.substr(dash + 1)))
      throw ParseError(at.line, at.column, {"@start-end"}, "malformed line range '" + text + "'");
    return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
  }

  CallSite parse_call(const std::string& caller) {
    Token kw = peek();
    if (kw.text != "call")
      throw ParseError(kw.line, kw.column, {"'call'", "'}'"}, "unexpected '" + kw.text + "' in method body");
    next();
    Dispatch dispatch = Dispatch::Virtual;
    bool is_new = false;
    if (!at_end() && peek().text == "static") {
      next();
      dispatch = Dispatch::Static;
    } else if (!at_end() && peek().text == "new") {
      next();
      dispatch = Dispatch::Constructor;
      is_new = true;
    }
    Token target = expect_word("Receiver.method");
    std::string text = target.text;
    int line = kw.line;
    if (auto at = text.rfind('@'); at != std::string::npos && text.find(')', at) == std::string::npos) {
      std::string num = text.substr(at + 1);
      if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError(target.line, target.column + static_cast<int>(at), {"@line"},
                         "malformed call line '" + num + "'");
      line = std::stoi(num);
      text.erase(at);
    }
    auto paren = text.find('(');
    std::string head = text.substr(0, paren);
    std::string params = paren == std::string::npos ? "()" : text.substr(paren);
    if (params.back() != ')')
      throw ParseError(target.line, target.column, {"')'"}, "malformed call '" + target.text + "'");

    CallSite call;
    call.caller = caller;
    call.line = line;
    call.dispatch = dispatch;
    if (is_new) {
      if (head.empty())
        throw ParseError(target.line, target.column, {"ClassName(params)"}, "constructor call needs a class");
      call.receiver_type = head;
      call.target = simple_class_name(head) + params;
    } else {
      auto dot = head.rfind('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == head.size())
        throw ParseError(target.line, target.column, {"Receiver.method"},
                         "call target '" + target.text + "' needs a receiver");
      call.receiver_type = head.substr(0, dot);
      call.target = head.substr(dot + 1) + params;
    }
    return call;
  }

  // Simple-name receivers become fully-qualified when unambiguous; unknown
  // names are kept verbatim and surface later as unresolved receivers.
  static void resolve_receivers(ModelData& data) {
    std::map<std::string, std::vector<std::string>> by_simple;
    std::map<std::string, bool> exact;
    for (const auto& c : data.classes) {
      by_simple[simple_class_name(c.fq_name)].push_back(c.fq_name);
      exact[c.fq_name] = true;
    }
    for (auto& c : data.classes) {
      for (auto& m : c.methods) {
        for (auto& call : m.calls) {
          if (!call.receiver_type || exact.contains(*call.receiver_type)) continue;
          auto it = by_simple.find(*call.receiver_type);
          if (it != by_simple.end() && it->second.size() == 1) call.receiver_type = it->second.front();
        }
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int last_line_;
};

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected,
                       const std::string& message)
    : ModelError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

ProjectModel parse_fixture_dsl(std::string_view text) {
  auto lines = split_lines(text);
  std::map<std::string, std::string> sources;
  auto stripped = extract_sources(lines, sources);
  Parser parser(tokenize(stripped), std::max<int>(1, static_cast<int>(lines.size())));
  return ProjectModel::create(parser.parse(std::move(sources)));
}

}  // namespace tplreach
