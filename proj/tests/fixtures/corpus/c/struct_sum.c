struct point {
  int x;
  int y;
};

int struct_sum(const struct point *p, int n) {
  int s = 0;
  for (int i = 0; i < n; i++) s += p[i].x * p[i].y;
  return s;
}
