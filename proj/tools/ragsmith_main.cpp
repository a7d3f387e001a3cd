#include "ragsmith/service/cli.hpp"

int main(int argc, char** argv) {
  return ragsmith::service::run_cli(argc, argv);
}
