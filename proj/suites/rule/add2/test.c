int add2(int a, int b);

int main(void) {
  int failed = 0;
  if (add2(2, 3) != 5) failed++;
  if (add2(-7, 7) != 0) failed++;
  if (add2(-5, -6) != -11) failed++;
  if (add2(100000, 23456) != 123456) failed++;
  return failed;
}
