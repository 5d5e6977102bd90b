// Acceptance suite: one pass/fail line per criterion.
#include <cstdio>
int main() { std::puts("[PASS] placeholder"); return 0; }
