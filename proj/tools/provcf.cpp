// Pipeline CLI; subcommands are wired up in pipeline.hpp as the library
// grows. Placeholder main until the orchestration layer lands.
#include <cstdio>

int main() {
    std::puts("provcf: no subcommands wired yet");
    return 1;
}
