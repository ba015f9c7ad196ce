int unique(int *l, int n);

int main(void) {
  int failed = 0;
  int a[] = {5, 3, 5, 2, 3, 3, 9, 0, 123};
  int expect[] = {0, 2, 3, 5, 9, 123};
  int m = unique(a, 9);
  if (m != 6) failed++;
  for (int i = 0; i < 6 && i < m; i++)
    if (a[i] != expect[i]) failed++;
  return failed;
}
