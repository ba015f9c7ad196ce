#!/usr/bin/env python3
"""Minimal Linux user-mode runner for static freestanding ELF executables.

Supports 32-bit ARM, AArch64 and RV64. Implements exit, exit_group, write,
getpid and kill. Faults terminate the process with the matching host signal
after printing a qemu-style diagnostic, so callers can treat it like
qemu-<arch>.
"""
import os
import resource
import signal
import sys

import unicorn as uc
from elftools.elf.elffile import ELFFile
from unicorn import arm_const, arm64_const, riscv_const

PAGE = 0x1000
STACK_TOP = 0x7F000000
STACK_SIZE = 0x100000
FAKE_PID = 4242

SIGNAL_TEXT = {
    signal.SIGSEGV: "Segmentation fault",
    signal.SIGILL: "Illegal instruction",
    signal.SIGFPE: "Floating point exception",
    signal.SIGBUS: "Bus error",
    signal.SIGABRT: "Aborted",
}


class Arch:
    def __init__(self, machine):
        if machine == "EM_ARM":
            self.uc = uc.Uc(uc.UC_ARCH_ARM, uc.UC_MODE_ARM)
            self.pc, self.sp = arm_const.UC_ARM_REG_PC, arm_const.UC_ARM_REG_SP
            self.nr = arm_const.UC_ARM_REG_R7
            self.args = [arm_const.UC_ARM_REG_R0 + i for i in range(3)]
            self.ret = arm_const.UC_ARM_REG_R0
            self.table = {1: "exit", 248: "exit_group", 4: "write", 20: "getpid", 37: "kill"}
        elif machine == "EM_AARCH64":
            self.uc = uc.Uc(uc.UC_ARCH_ARM64, uc.UC_MODE_ARM)
            self.pc, self.sp = arm64_const.UC_ARM64_REG_PC, arm64_const.UC_ARM64_REG_SP
            self.nr = arm64_const.UC_ARM64_REG_X8
            self.args = [arm64_const.UC_ARM64_REG_X0 + i for i in range(3)]
            self.ret = arm64_const.UC_ARM64_REG_X0
            self.table = {93: "exit", 94: "exit_group", 64: "write", 172: "getpid", 129: "kill"}
        elif machine == "EM_RISCV":
            self.uc = uc.Uc(uc.UC_ARCH_RISCV, uc.UC_MODE_RISCV64)
            self.pc, self.sp = riscv_const.UC_RISCV_REG_PC, riscv_const.UC_RISCV_REG_SP
            self.nr = riscv_const.UC_RISCV_REG_A7
            self.args = [riscv_const.UC_RISCV_REG_A0 + i for i in range(3)]
            self.ret = riscv_const.UC_RISCV_REG_A0
            self.table = {93: "exit", 94: "exit_group", 64: "write", 172: "getpid", 129: "kill"}
        else:
            raise SystemExit(f"uemu: unsupported machine {machine}")
        self.riscv = machine == "EM_RISCV"
        self.bits = 32 if machine == "EM_ARM" else 64


def die_with(sig, detail):
    sys.stdout.flush()
    sys.stderr.write(
        f"uemu: uncaught target signal {int(sig)} ({SIGNAL_TEXT.get(sig, 'Signal')}) - {detail}\n")
    sys.stderr.flush()
    resource.setrlimit(resource.RLIMIT_CORE, (0, 0))
    signal.signal(sig, signal.SIG_DFL)
    os.kill(os.getpid(), sig)
    sys.exit(128 + int(sig))


def load(arch, elf):
    for seg in elf.iter_segments():
        if seg["p_type"] != "PT_LOAD":
            continue
        start = seg["p_vaddr"] & ~(PAGE - 1)
        end = (seg["p_vaddr"] + seg["p_memsz"] + PAGE - 1) & ~(PAGE - 1)
        for page in range(start, end, PAGE):
            try:
                arch.uc.mem_map(page, PAGE)
            except uc.UcError:
                pass  # already mapped by an adjacent segment
        arch.uc.mem_write(seg["p_vaddr"], seg.data())
    arch.uc.mem_map(STACK_TOP - STACK_SIZE, STACK_SIZE)
    arch.uc.reg_write(arch.sp, STACK_TOP - 256)
    return elf["e_entry"]


def main():
    if len(sys.argv) < 2:
        raise SystemExit("usage: uemu.py <static-elf> [args...]")
    with open(sys.argv[1], "rb") as fh:
        elf = ELFFile(fh)
        arch = Arch(elf["e_machine"])
        entry = load(arch, elf)

    state = {"exit": None, "signal": None}

    def syscall(mu):
        nr = mu.reg_read(arch.nr)
        name = arch.table.get(nr)
        a = [mu.reg_read(r) for r in arch.args]
        result = -38  # ENOSYS
        if name in ("exit", "exit_group"):
            state["exit"] = a[0] & 0xFF
            mu.emu_stop()
            return
        if name == "write":
            data = bytes(mu.mem_read(a[1], a[2]))
            stream = sys.stdout.buffer if a[0] == 1 else sys.stderr.buffer
            stream.write(data)
            result = len(data)
        elif name == "getpid":
            result = FAKE_PID
        elif name == "kill":
            state["signal"] = signal.Signals(a[1])
            mu.emu_stop()
            return
        mu.reg_write(arch.ret, result & ((1 << arch.bits) - 1))

    def on_intr(mu, intno, _user):
        if arch.riscv:
            if intno in (8, 9, 11):
                syscall(mu)
                mu.reg_write(arch.pc, mu.reg_read(arch.pc) + 4)
                return
        elif intno == 2:
            syscall(mu)
            return
        state["signal"] = signal.SIGILL
        mu.emu_stop()

    arch.uc.hook_add(uc.UC_HOOK_INTR, on_intr)
    try:
        arch.uc.emu_start(entry, 0)
    except uc.UcError as err:
        pc = arch.uc.reg_read(arch.pc)
        if err.errno in (uc.UC_ERR_INSN_INVALID, uc.UC_ERR_EXCEPTION):
            die_with(signal.SIGILL, f"Illegal instruction at pc 0x{pc:x}")
        die_with(signal.SIGSEGV, f"Invalid address access ({err}) at pc 0x{pc:x}")

    if state["signal"] is not None:
        die_with(state["signal"], f"raised by target at pc 0x{arch.uc.reg_read(arch.pc):x}")
    if state["exit"] is None:
        die_with(signal.SIGSEGV, "execution left mapped code")
    sys.stdout.flush()
    sys.exit(state["exit"])


if __name__ == "__main__":
    main()
