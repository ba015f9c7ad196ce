int fizz_buzz(int n);

int main(void) {
  int failed = 0;
  if (fizz_buzz(50) != 0) failed++;
  if (fizz_buzz(78) != 2) failed++;
  if (fizz_buzz(79) != 3) failed++;
  if (fizz_buzz(100) != 3) failed++;
  if (fizz_buzz(200) != 6) failed++;
  if (fizz_buzz(4000) != 192) failed++;
  return failed;
}
