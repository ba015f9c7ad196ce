int greatest_common_divisor(int a, int b) {
  while (b > 0) {
    int m = a % b;
    a = b;
    b = m;
  }
  return a;
}
