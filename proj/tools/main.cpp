#include <csignal>
#include <iostream>

#include "cli.hpp"

namespace {
extern "C" void on_signal(int) { maxinf::cli::request_stop(); }
}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGTERM, on_signal);
  std::signal(SIGINT, on_signal);
  std::vector<std::string> args(argv + 1, argv + argc);
  return maxinf::cli::run(args, std::cout, std::cerr);
}
