#include <iostream>

#include "ptfree/cli.hpp"

int main(int argc, char** argv) {
  using namespace ptfree::cli;
  ParsedArgs args = parse_command_line(argc, argv);
  if (args.exit_now) {
    (args.exit_code == 0 ? std::cout : std::cerr) << args.message;
    return args.exit_code;
  }
  RunResult res = run(args.config);
  try {
    if (args.config.dump_path && res.exit_code == 0) write_atomic(*args.config.dump_path, res.dump);
    if (args.config.out_path)
      write_atomic(*args.config.out_path, res.output);
    else
      (res.exit_code == 2 ? std::cerr : std::cout) << res.output;
  } catch (const std::exception& e) {
    std::cerr << error_document("io_error", e.what());
    return 2;
  }
  return res.exit_code;
}
