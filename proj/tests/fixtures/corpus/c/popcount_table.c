static const unsigned char kBits[16] = {0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4};

int popcount_table(unsigned x) {
  int n = 0;
  for (int i = 0; i < 8; i++) {
    n += kBits[x & 15u];
    x >>= 4;
  }
  return n;
}
