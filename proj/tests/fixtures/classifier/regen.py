#!/usr/bin/env python3
"""Rebuild the labelled failure fixtures: clang -O0 armv5 output of a suite
function, one textual mutation, the suite's test.c alongside."""
import pathlib
import shutil
import subprocess

HERE = pathlib.Path(__file__).resolve().parent
SUITES = HERE.parents[2] / "suites"

# name: (suite program, class, [(old, new)])
FIXTURES = {
    "reg_max_clobber": ("mini/he035_max_element", "RegisterAllocation", [
        ("\tldr\tr0, [r0, r1, lsl #2]\n\tstr\tr0, [sp, #4]\n",
         "\tldr\tr0, [sp, #4]\n\tstr\tr0, [sp, #4]\n")]),
    "reg_sum_clobber": ("mini/he008_sum_product", "RegisterAllocation", [
        ("\tldr\tr1, [r0, r1, lsl #2]\n\tldr\tr0, [sp, #8]\n",
         "\tldr\tr1, [r0, r1, lsl #2]\n\tldr\tr1, [sp, #8]\n")]),
    "reg_factorial_clobber": ("rule/factorial", "RegisterAllocation", [
        ("\tldr\tr1, [sp]\n\tldr\tr2, [sp, #4]\n", "\tldr\tr1, [sp]\n\tldr\tr1, [sp, #4]\n")]),
    "reg_gcd_clobber": ("mini/he013_gcd", "RegisterAllocation", [
        ("\tldr\tr0, [sp, #8]\n\tstr\tr0, [r11, #-4]\n\tldr\tr0, [sp, #4]\n",
         "\tldr\tr0, [sp, #8]\n\tldr\tr0, [sp, #4]\n\tstr\tr0, [r11, #-4]\n")]),
    "addr_null_load": ("mini/he035_max_element", "Addressing", [
        ("\tldr\tr0, [sp, #12]\n\tldr\tr0, [r0]\n", "\tmov\tr0, #0\n\tldr\tr0, [r0]\n")]),
    "addr_swapped_store": ("mini/he008_sum_product", "Addressing", [
        ("\tldr\tr1, [sp, #16]\n\tstr\tr0, [r1]\n", "\tldr\tr1, [sp, #16]\n\tstr\tr1, [r0]\n")]),
    "addr_bad_frame": ("rule/factorial", "Addressing", [
        ("\tsub\tsp, sp, #8\n", "\tsub\tsp, r0, #8\n")]),
    "addr_value_as_base": ("mini/he013_gcd", "Addressing", [
        ("\tstr\tr1, [sp, #8]\n", "\tstr\tr1, [r1, #8]\n")]),
    "other_div_zero": ("mini/he013_gcd", "Other", [
        ("\tldr\tr1, [sp, #8]\n\tbl\t__aeabi_idivmod\n", "\tmov\tr1, #0\n\tbl\t__aeabi_idivmod\n")]),
    "other_immediate": ("rule/factorial", "Other", [("\tcmp\tr0, #2\n", "\tcmp\tr0, #3\n")]),
    "other_endless_loop": ("mini/he035_max_element", "Other", [
        ("\tadd\tr0, r0, #1\n", "\tadd\tr0, r0, #0\n")]),
    "other_branch_cond": ("mini/he008_sum_product", "Other", [("\tbge\t.LBB0_4\n", "\tbgt\t.LBB0_4\n")]),
}

CLANG = ["clang", "--target=armv5te-unknown-linux-gnueabi", "-ffreestanding",
         "-fno-asynchronous-unwind-tables", "-S", "-O0", "-o", "-"]


def main():
    for name, (prog, label, edits) in FIXTURES.items():
        src = SUITES / prog
        text = subprocess.run(CLANG + [str(src / "func.c")], check=True,
                              capture_output=True, text=True).stdout
        for old, new in edits:
            assert text.count(old) == 1, (name, old)
            text = text.replace(old, new)
        out = HERE / name
        out.mkdir(exist_ok=True)
        (out / "candidate.s").write_text(text)
        shutil.copy(src / "test.c", out / "test.c")
        (out / "expected").write_text(label + "\n")


if __name__ == "__main__":
    main()
