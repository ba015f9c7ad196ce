void fill(int *p, int n, int v) {
  for (int i = 0; i < n; i++) p[i] = v;
}
