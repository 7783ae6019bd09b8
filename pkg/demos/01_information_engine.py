"""Exact information measures on small alphabets.

Run: python demos/01_information_engine.py
"""
import numpy as np

from irdpi import (
    Alphabet,
    Channel,
    JointDistribution,
    binary_entropy,
    conditional_mutual_information,
    entropy,
    mutual_information,
    push_through_channel,
)

# A uniform bit y sent through a binary symmetric channel with crossover 0.1.
y, x, z = Alphabet("y", 2), Alphabet("x", 2), Alphabet("z", 2)
bsc = lambda e: [[1 - e, e], [e, 1 - e]]

p_y = JointDistribution([y], [0.5, 0.5])
p_yx = push_through_channel(p_y, Channel(y, x, bsc(0.1)), mode="append")
print("H(y)        =", entropy(p_y))
print("I(y; x)     =", mutual_information(p_yx, "y", "x"), " (1 - h2(0.1) =", 1 - binary_entropy(0.1), ")")

# Processing x further can only lose information about y.
p_yxz = push_through_channel(p_yx, Channel(x, z, bsc(0.1)), mode="append")
print("I(y; z)     =", mutual_information(p_yxz, "y", "z"), " (two BSC(0.1) in series = BSC(0.18))")
print("I(y; z | x) =", conditional_mutual_information(p_yxz, "y", "z", "x"), " (z sees y only through x)")

# XOR: x is independent of y on its own, but fully informative once s is known.
s = Alphabet("s", 2)
mass = np.zeros((2, 2, 2))
for a in (0, 1):
    for b in (0, 1):
        mass[a, b, a ^ b] = 0.25
xor = JointDistribution([y, s, x], mass)
print("XOR: I(y; x) =", mutual_information(xor, "y", "x"), " I(y; x | s) =",
      conditional_mutual_information(xor, "y", "x", "s"))
