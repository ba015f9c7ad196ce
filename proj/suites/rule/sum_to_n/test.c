int sum_to_n(int n);

int main(void) {
  int failed = 0;
  if (sum_to_n(0) != 0) failed++;
  if (sum_to_n(1) != 1) failed++;
  if (sum_to_n(10) != 55) failed++;
  if (sum_to_n(100) != 5050) failed++;
  return failed;
}
