#include <sarki/cli.hpp>

int main(int argc, char** argv) { return sarki::cli::run(argc, argv); }
