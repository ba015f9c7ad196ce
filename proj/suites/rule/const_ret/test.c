int const_ret(void);

int main(void) {
  int failed = 0;
  if (const_ret() != 5) failed++;
  if (const_ret() + const_ret() != 10) failed++;
  return failed;
}
