// Serves a bundled SUT, or an implementation automaton from a spec file,
// over the line protocol on stdin/stdout.

#include <iostream>

#include "CLI11.hpp"
#include "reqtest/errors.hpp"
#include "reqtest/spec_io.hpp"
#include "reqtest/sut.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Line-protocol system under test"};
  std::string name, impl;
  app.add_option("name", name, "Builtin SUT: passageway, passageway-bug, passageway3, passageway3-bug, carriage, carriage-bug, i1, fig6");
  app.add_option("--impl", impl, "Serve this implementation automaton instead");
  CLI11_PARSE(app, argc, argv);
  std::ios::sync_with_stdio(false);
  try {
    std::unique_ptr<reqtest::SutSession> sut;
    if (!impl.empty())
      sut = std::make_unique<reqtest::AutomatonSut>(reqtest::load_spec_file(impl));
    else if (!name.empty())
      sut = reqtest::make_builtin_sut(name);
    else
      throw reqtest::SpecError("give a builtin name or --impl FILE");
    return reqtest::serve_sut(*sut, std::cin, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "reqtest-sut: " << e.what() << "\n";
    return 2;
  }
}
