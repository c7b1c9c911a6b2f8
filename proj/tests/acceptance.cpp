#include <cstdio>

int main() {
  std::puts("acceptance: criteria to be registered");
  return 0;
}
