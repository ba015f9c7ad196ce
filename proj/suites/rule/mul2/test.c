int mul2(int a, int b);

int main(void) {
  int failed = 0;
  if (mul2(6, 7) != 42) failed++;
  if (mul2(-3, 4) != -12) failed++;
  if (mul2(0, 99) != 0) failed++;
  if (mul2(9, 9) != 81) failed++;
  return failed;
}
