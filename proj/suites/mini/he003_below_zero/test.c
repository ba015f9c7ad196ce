int below_zero(const int *operations, int n);

int main(void) {
  int failed = 0;
  int a[] = {1, 2, -3, 1, 2, -3};
  int b[] = {1, 2, -4, 5, 6};
  int c[] = {1, -1, 2, -2, 5, -5, 4, -4};
  int d[] = {1, -1, 2, -2, 5, -5, 4, -5};
  if (below_zero(a, 0) != 0) failed++;
  if (below_zero(a, 6) != 0) failed++;
  if (below_zero(b, 5) != 1) failed++;
  if (below_zero(c, 8) != 0) failed++;
  if (below_zero(d, 8) != 1) failed++;
  return failed;
}
