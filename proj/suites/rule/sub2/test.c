int sub2(int a, int b);

int main(void) {
  int failed = 0;
  if (sub2(5, 3) != 2) failed++;
  if (sub2(3, 5) != -2) failed++;
  if (sub2(0, -9) != 9) failed++;
  return failed;
}
