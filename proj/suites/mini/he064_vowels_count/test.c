int vowels_count(const char *s);

int main(void) {
  int failed = 0;
  if (vowels_count("abcde") != 2) failed++;
  if (vowels_count("Alone") != 3) failed++;
  if (vowels_count("key") != 2) failed++;
  if (vowels_count("bye") != 1) failed++;
  if (vowels_count("keY") != 2) failed++;
  if (vowels_count("bYe") != 1) failed++;
  if (vowels_count("ACEDY") != 3) failed++;
  return failed;
}
