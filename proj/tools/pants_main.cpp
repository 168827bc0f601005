#include <cstdio>
int main() { std::puts("pants"); return 0; }
