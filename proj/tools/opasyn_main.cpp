// opasyn_main.cpp — command line entry point (placeholder during bring-up)
#include <cstdio>

int main() {
    std::puts("opasyn");
    return 0;
}
