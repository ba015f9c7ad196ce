int sign(int x);

int main(void) {
  int failed = 0;
  if (sign(42) != 1) failed++;
  if (sign(0) != 0) failed++;
  if (sign(-42) != -1) failed++;
  return failed;
}
