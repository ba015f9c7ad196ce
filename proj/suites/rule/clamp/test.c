int clamp(int x, int lo, int hi);

int main(void) {
  int failed = 0;
  if (clamp(5, 0, 10) != 5) failed++;
  if (clamp(-5, 0, 10) != 0) failed++;
  if (clamp(50, 0, 10) != 10) failed++;
  if (clamp(10, 0, 10) != 10) failed++;
  return failed;
}
