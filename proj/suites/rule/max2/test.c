int max2(int a, int b);

int main(void) {
  int failed = 0;
  if (max2(1, 2) != 2) failed++;
  if (max2(2, 1) != 2) failed++;
  if (max2(-4, -9) != -4) failed++;
  if (max2(3, 3) != 3) failed++;
  return failed;
}
