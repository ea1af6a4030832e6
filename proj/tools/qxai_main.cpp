#include <cstdio>

int main() {
  std::puts("qxai: cli not wired yet");
  return 2;
}
