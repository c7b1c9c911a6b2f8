#include <cstdio>

int main() {
  std::puts("inls_lab: experiment runner (subcommands land here soon)");
  return 0;
}
