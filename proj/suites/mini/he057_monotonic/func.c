/* 1 if the list is monotonically increasing or decreasing. */
int monotonic(const int *l, int n) {
  int incr = 0;
  int decr = 0;
  for (int i = 1; i < n; i++) {
    if (l[i] > l[i - 1])
      incr = 1;
    if (l[i] < l[i - 1])
      decr = 1;
  }
  if (incr + decr == 2)
    return 0;
  return 1;
}
