int string_length(const char *s);

int main(void) {
  int failed = 0;
  if (string_length("") != 0) failed++;
  if (string_length("x") != 1) failed++;
  if (string_length("asdasnakj") != 9) failed++;
  return failed;
}
