"""Averaging a kernel over equal partitions: the l1 error halves with each dyadic refinement."""
from graphonlab.kernels import PartitionSpec, analytic_kernel, average

W = analytic_kernel("product", 256)
prev = None
for n in (2, 4, 8, 16, 32, 64, 128):
    err = (average(W, PartitionSpec.equal(n)) - W).l1_norm()
    ratio = "" if prev is None else f"  ratio {err / prev:.3f}"
    print(f"n={n:<4} ||W_n - W||_1 = {err:.5f}{ratio}")
    prev = err
