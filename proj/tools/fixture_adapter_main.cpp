// Execution adapter over a code model: one JSON request on stdin, one JSON
// response on stdout.
#include <CLI11.hpp>

#include <iostream>
#include <iterator>

#include "tplreach/fixture_adapter.hpp"
#include "tplreach/model_json.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixture execution adapter"};
  std::string model_path;
  app.add_option("--model", model_path, "Code model (.json or fixture DSL)")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    tplreach::FixtureAdapter adapter(tplreach::load_model_file(model_path));
    std::string input(std::istreambuf_iterator<char>(std::cin), {});
    auto request = tplreach::request_from_json(nlohmann::json::parse(input));
    std::cout << tplreach::response_to_json(adapter.execute(request)).dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "fixture_adapter: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
