#include <iostream>

#include "entrocode/cli/battery.hpp"

int main() {
  const int failures = entrocode::cli::run_battery(std::cout, entrocode::cli::Tolerances{});
  std::cout << failures << " of 10 criteria failed\n";
  return failures == 0 ? 0 : 1;
}
