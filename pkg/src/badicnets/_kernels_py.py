"""Pure-Python fallback for the hot kernels.

Same signatures and results as the compiled extension (_kernels.pyx); used
automatically when the extension is not built.  See benchmarks/bench_kernels.py
for the speed comparison.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def gen_block_digits(truncs, base, ndig, s, m, row_vals, row_off,
                     psi_flat, lam_flat, add_flat, mul_flat, q):
    """Digit matrices for a block of points.

    truncs[t] holds tau_ndig(s_n) for the t-th index of the block; rows for
    all (coordinate, output digit) pairs are concatenated in row_vals with
    offsets row_off (length s*m + 1, entries column-0-first).  psi_flat is
    the (ndig x q) input bijection table, lam_flat the (s*m x q) output
    bijection table, add_flat/mul_flat the flat q x q field tables.

    Returns bytes of length len(truncs) * s * m; digit (i, j) of point t sits
    at t*s*m + i*m + j, most significant output digit first (j = 0 is the
    b^-1 digit).
    """
    count = len(truncs)
    sm = s * m
    out = bytearray(count * sm)
    pd = [0] * ndig
    for t in range(count):
        v = truncs[t]
        for r in range(ndig):
            v, d = divmod(v, base)
            pd[r] = psi_flat[r * q + d]
        o = t * sm
        for ij in range(sm):
            start = row_off[ij]
            end = row_off[ij + 1]
            acc = 0
            for rr in range(end - start):
                e = row_vals[start + rr]
                if e:
                    acc = add_flat[acc * q + mul_flat[e * q + pd[rr]]]
            out[o + ij] = lam_flat[ij * q + acc]
    return bytes(out)


def composition_counts(digits, count, s, m, d, base):
    """Counts of points per elementary interval at depth vector d.

    digits is the packed buffer from gen_block_digits (stride s*m); the key of
    a point concatenates its first d[i] output digits per coordinate, most
    significant first, coordinate 1 outermost.  Returns a list of length
    base**sum(d) indexed by key.
    """
    total = sum(d)
    counts = [0] * (base**total)
    sm = s * m
    for t in range(count):
        o = t * sm
        key = 0
        for i in range(s):
            di = d[i]
            base_i = o + i * m
            for j in range(di):
                key = key * base + digits[base_i + j]
        counts[key] += 1
    return counts
