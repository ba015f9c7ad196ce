int max_element(const int *l, int n) {
  int max = l[0];
  for (int i = 1; i < n; i++)
    if (l[i] > max)
      max = l[i];
  return max;
}
