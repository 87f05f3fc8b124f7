"""Pure-Python divider kernel; the fallback when the extension is not built.

Same integer recipe as ``_kernels_c.pyx``, on unbounded Python ints.
"""


def divide_raw(x_raw, w_raw, degree, x_frac, w_frac, frac, out_frac, consts):
    k0, k1, k2 = (int(c) for c in consts)
    one = 1 << frac
    three = 3 << frac
    one_half = 3 << (frac - 1)
    out_shift = frac - out_frac
    half_lsb = (1 << (out_shift - 1)) if out_shift > 0 else 0
    w_up = frac - w_frac
    n = len(x_raw)
    result = [0] * n
    zs = [0] * n
    for i in range(n):
        x = int(x_raw[i])
        z = x.bit_length() - 1 - x_frac
        sh = frac - x_frac - z
        m = x << sh if sh >= 0 else x >> -sh
        if degree == 2:
            s = m - one_half
            corr = ((k0 * ((s * s) >> frac)) >> frac) + k1
        else:
            a = m - one
            a2 = (a * a) >> frac
            half_a = a >> 1
            q1 = k1 - ((a << 1) + half_a) + a2
            q2 = k2 + half_a + a2
            corr = (k0 * ((q1 * q2) >> frac)) >> frac
        p = (corr * (three - m)) >> frac
        w = int(w_raw[i])
        ws = (w << w_up if w_up >= 0 else w >> -w_up) >> (z + 1)
        r = (p * ws) >> frac
        result[i] = (r + half_lsb) >> out_shift
        zs[i] = z
    return result, zs
