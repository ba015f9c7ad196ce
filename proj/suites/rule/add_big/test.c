int add_big(int a);

int main(void) {
  int failed = 0;
  if (add_big(0) != 100000) failed++;
  if (add_big(-100000) != 0) failed++;
  if (add_big(23456) != 123456) failed++;
  return failed;
}
