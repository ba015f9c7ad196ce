void sum_product(const int *numbers, int n, int *sum, int *product);

int main(void) {
  int failed = 0;
  int s, p;
  int a[] = {1, 1, 1};
  int b[] = {100, 0};
  int c[] = {3, 5, 7};
  sum_product(a, 0, &s, &p);
  if (s != 0 || p != 1) failed++;
  sum_product(a, 3, &s, &p);
  if (s != 3 || p != 1) failed++;
  sum_product(b, 2, &s, &p);
  if (s != 100 || p != 0) failed++;
  sum_product(c, 3, &s, &p);
  if (s != 15 || p != 105) failed++;
  return failed;
}
