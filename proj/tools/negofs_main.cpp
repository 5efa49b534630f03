// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include <iostream>

#include "negofs/bench.hpp"

int main(int argc, char** argv) {
  return negofs::run_cli(argc, argv, std::cout, std::cerr);
}
