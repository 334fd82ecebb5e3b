#include <exception>
#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  try {
    return rbmlab::cli::run_app(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
