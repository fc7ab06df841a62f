#include "tgsd/cli.hpp"

int main(int argc, char** argv) {
  return tgsd::cli::run(std::vector<std::string>(argv, argv + argc));
}
