int mean(const int *a, int n) {
  long s = 0;
  for (int i = 0; i < n; i++) s += a[i];
  return n ? (int)(s / n) : 0;
}
