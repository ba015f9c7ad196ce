int const_ret(void) { return 5; }
