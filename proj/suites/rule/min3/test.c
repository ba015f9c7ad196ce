int min3(int a, int b, int c);

int main(void) {
  int failed = 0;
  if (min3(1, 2, 3) != 1) failed++;
  if (min3(3, 1, 2) != 1) failed++;
  if (min3(3, 2, 1) != 1) failed++;
  if (min3(-1, -5, 0) != -5) failed++;
  return failed;
}
