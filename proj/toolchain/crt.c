/* Freestanding startup and support routines for test binaries linked without
 * a target libc. Supports 32-bit ARM (EABI), AArch64 and RV64. */

int main(void);

#if defined(__arm__)
#define SYS_EXIT 1
#define SYS_WRITE 4
#define SYS_GETPID 20
#define SYS_KILL 37
static long raw_syscall3(long n, long a, long b, long c) {
  register long r7 __asm__("r7") = n;
  register long r0 __asm__("r0") = a;
  register long r1 __asm__("r1") = b;
  register long r2 __asm__("r2") = c;
  __asm__ volatile("svc #0" : "+r"(r0) : "r"(r7), "r"(r1), "r"(r2) : "memory");
  return r0;
}
#elif defined(__aarch64__)
#define SYS_EXIT 93
#define SYS_WRITE 64
#define SYS_GETPID 172
#define SYS_KILL 129
static long raw_syscall3(long n, long a, long b, long c) {
  register long x8 __asm__("x8") = n;
  register long x0 __asm__("x0") = a;
  register long x1 __asm__("x1") = b;
  register long x2 __asm__("x2") = c;
  __asm__ volatile("svc #0" : "+r"(x0) : "r"(x8), "r"(x1), "r"(x2) : "memory");
  return x0;
}
#elif defined(__riscv)
#define SYS_EXIT 93
#define SYS_WRITE 64
#define SYS_GETPID 172
#define SYS_KILL 129
static long raw_syscall3(long n, long a, long b, long c) {
  register long a7 __asm__("a7") = n;
  register long a0 __asm__("a0") = a;
  register long a1 __asm__("a1") = b;
  register long a2 __asm__("a2") = c;
  __asm__ volatile("ecall" : "+r"(a0) : "r"(a7), "r"(a1), "r"(a2) : "memory");
  return a0;
}
#else
#error "unsupported target"
#endif

#define SIGFPE_NUM 8

__attribute__((noreturn)) void rt_exit(int code) {
  for (;;) raw_syscall3(SYS_EXIT, code, 0, 0);
}

long rt_write(int fd, const void *buf, unsigned long len) {
  return raw_syscall3(SYS_WRITE, fd, (long)buf, (long)len);
}

void rt_raise_fpe(void) {
  long pid = raw_syscall3(SYS_GETPID, 0, 0, 0);
  raw_syscall3(SYS_KILL, pid, SIGFPE_NUM, 0);
}

void *memset(void *dst, int value, unsigned long n) {
  unsigned char *d = dst;
  while (n--) *d++ = (unsigned char)value;
  return dst;
}

void *memcpy(void *dst, const void *src, unsigned long n) {
  unsigned char *d = dst;
  const unsigned char *s = src;
  while (n--) *d++ = *s++;
  return dst;
}

void *memmove(void *dst, const void *src, unsigned long n) {
  unsigned char *d = dst;
  const unsigned char *s = src;
  if (d < s) {
    while (n--) *d++ = *s++;
  } else {
    while (n--) d[n] = s[n];
  }
  return dst;
}

#if defined(__arm__)
/* ARM EABI integer division helpers; ARMv5 has no divide instruction. */
static unsigned udiv32(unsigned num, unsigned den, unsigned *rem) {
  unsigned q = 0, r = 0;
  for (int i = 31; i >= 0; --i) {
    r = (r << 1) | ((num >> i) & 1u);
    if (r >= den) {
      r -= den;
      q |= 1u << i;
    }
  }
  *rem = r;
  return q;
}

void __aeabi_idiv0(void) { rt_raise_fpe(); }

unsigned __aeabi_uidiv(unsigned num, unsigned den) {
  unsigned r;
  if (den == 0) {
    __aeabi_idiv0();
    return 0;
  }
  return udiv32(num, den, &r);
}

int __aeabi_idiv(int num, int den) {
  unsigned r;
  if (den == 0) {
    __aeabi_idiv0();
    return 0;
  }
  unsigned un = num < 0 ? 0u - (unsigned)num : (unsigned)num;
  unsigned ud = den < 0 ? 0u - (unsigned)den : (unsigned)den;
  unsigned q = udiv32(un, ud, &r);
  return ((num < 0) != (den < 0)) ? (int)(0u - q) : (int)q;
}

/* {quotient, remainder} returned in r0:r1 */
unsigned long long __aeabi_uidivmod(unsigned num, unsigned den) {
  unsigned r = 0, q = 0;
  if (den == 0)
    __aeabi_idiv0();
  else
    q = udiv32(num, den, &r);
  return ((unsigned long long)r << 32) | q;
}

unsigned long long __aeabi_idivmod(int num, int den) {
  unsigned r = 0, q = 0;
  if (den == 0) {
    __aeabi_idiv0();
  } else {
    unsigned un = num < 0 ? 0u - (unsigned)num : (unsigned)num;
    unsigned ud = den < 0 ? 0u - (unsigned)den : (unsigned)den;
    q = udiv32(un, ud, &r);
    if ((num < 0) != (den < 0)) q = 0u - q;
    if (num < 0) r = 0u - r;
  }
  return ((unsigned long long)r << 32) | q;
}
#endif

void _start(void) { rt_exit(main()); }
