int max_element(const int *l, int n);

int main(void) {
  int failed = 0;
  int a[] = {1, 2, 3};
  int b[] = {5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10};
  if (max_element(a, 3) != 3) failed++;
  if (max_element(b, 11) != 124) failed++;
  return failed;
}
