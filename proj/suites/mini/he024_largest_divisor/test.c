int largest_divisor(int n);

int main(void) {
  int failed = 0;
  if (largest_divisor(3) != 1) failed++;
  if (largest_divisor(7) != 1) failed++;
  if (largest_divisor(10) != 5) failed++;
  if (largest_divisor(100) != 50) failed++;
  if (largest_divisor(49) != 7) failed++;
  return failed;
}
