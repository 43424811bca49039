// grasmap command-line tool (work in progress; subcommands land with the library).
#include <cstdio>

int main() {
  std::fprintf(stderr, "grasmap: no subcommands wired yet\n");
  return 2;
}
