int sum_to_n(int n) {
  return n * (n + 1) / 2;
}
