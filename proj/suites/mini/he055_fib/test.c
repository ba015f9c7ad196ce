int fib(int n);

int main(void) {
  int failed = 0;
  if (fib(10) != 55) failed++;
  if (fib(1) != 1) failed++;
  if (fib(8) != 21) failed++;
  if (fib(11) != 89) failed++;
  if (fib(12) != 144) failed++;
  return failed;
}
