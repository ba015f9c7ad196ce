int monotonic(const int *l, int n);

int main(void) {
  int failed = 0;
  int a[] = {1, 2, 4, 10};
  int b[] = {1, 2, 4, 20};
  int c[] = {1, 20, 4, 10};
  int d[] = {4, 1, 0, -10};
  int e[] = {4, 1, 1, 0};
  int f[] = {1, 2, 3, 2, 5, 60};
  int g[] = {9, 9, 9, 9};
  if (monotonic(a, 4) != 1) failed++;
  if (monotonic(b, 4) != 1) failed++;
  if (monotonic(c, 4) != 0) failed++;
  if (monotonic(d, 4) != 1) failed++;
  if (monotonic(e, 4) != 1) failed++;
  if (monotonic(f, 6) != 0) failed++;
  if (monotonic(g, 4) != 1) failed++;
  return failed;
}
