int power(int base, int exp) {
  int r = 1;
  int i = 0;
  while (i != exp) {
    r = r * base;
    i = i + 1;
  }
  return r;
}
