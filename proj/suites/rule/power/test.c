int power(int base, int exp);

int main(void) {
  int failed = 0;
  if (power(2, 10) != 1024) failed++;
  if (power(3, 0) != 1) failed++;
  if (power(-2, 3) != -8) failed++;
  return failed;
}
