/* Sum and product of a list; empty sum is 0 and empty product is 1. */
void sum_product(const int *numbers, int n, int *sum, int *product) {
  int s = 0;
  int p = 1;
  for (int i = 0; i < n; i++) {
    s += numbers[i];
    p *= numbers[i];
  }
  *sum = s;
  *product = p;
}
