#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tplreach/model.hpp"

namespace tplreach {

class ParseError : public ModelError {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Parses the compact fixture language used for tests and demos.
///
///     project demo
///     dependency org.lib:lib 1.0 direct compile
///     source src/A.src <<<
///     ...verbatim text...
///     >>>
///     class app.A in src/A.src {
///       import org.lib.B
///       field int count
///       public m() @3-9 {
///         call B.f@7
///       }
///     }
///     dep org.lib:lib class org.lib.B { f() }
///
/// Methods take modifiers `public|protected|package|private`, `static`,
/// `ctor`, `@factory` and `@setter`. Calls are `call [static|new]
/// Receiver.name[(params)][@line]`; a missing line uses the call's own DSL
/// line, and a method without an explicit `@start-end` spans its DSL lines
/// widened to cover its calls. Receivers may use a class's simple name when it
/// is unambiguous. Throws ParseError, or the ProjectModel::create errors.
ProjectModel parse_fixture_dsl(std::string_view text);

}  // namespace tplreach
