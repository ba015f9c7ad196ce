int greatest_common_divisor(int a, int b);

int main(void) {
  int failed = 0;
  if (greatest_common_divisor(3, 7) != 1) failed++;
  if (greatest_common_divisor(10, 15) != 5) failed++;
  if (greatest_common_divisor(49, 14) != 7) failed++;
  if (greatest_common_divisor(144, 60) != 12) failed++;
  return failed;
}
