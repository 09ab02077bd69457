#include <cstdio>

int main() {
    std::puts("corrkit: command line interface not wired up yet");
    return 2;
}
