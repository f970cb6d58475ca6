#include <cstdio>

int main() {
  std::puts("pillarflow CLI placeholder");
  return 0;
}
