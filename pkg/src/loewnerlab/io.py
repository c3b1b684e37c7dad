"""CSV tables at 17 significant digits, enough to round-trip every double."""
import io

import numpy as np


def fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def csv_text(header, rows):
    """Render ``rows`` under ``header`` as CSV text with ``\\n`` line endings."""
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, header, rows):
    text = csv_text(header, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def driver_rows(path, stride=1):
    """``time,k,value`` rows (k is 1-based) every ``stride`` grid steps plus the end."""
    idx = _sampled(path.times.size, stride)
    return [(path.times[i], k + 1, path.V[i, k]) for i in idx for k in range(path.n)]


def pole_rows(path, stride=1):
    if path.S is None:
        return []
    idx = _sampled(path.times.size, stride)
    return [(path.times[i], j + 1, path.S[i, j].real, path.S[i, j].imag)
            for i in idx for j in range(path.S.shape[1])]


def _sampled(n, stride):
    idx = list(range(0, n, max(1, stride)))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    return idx


def measure_rows(m):
    """``position,weight`` rows in ascending position."""
    return list(zip(m.positions, m.weights))


def cdf_rows(m):
    """``x,F`` at every atom."""
    return list(zip(m.positions, np.cumsum(m.weights)))


def probe_rows(probe):
    """``t,re_g,im_g,status`` along one flow trajectory."""
    out = []
    for t, g in zip(probe.times, probe.trajectory):
        alive = np.isfinite(g)
        out.append((t, g.real if alive else "nan", g.imag if alive else "nan",
                    "alive" if alive else "swallowed"))
    return out


def grid_rows(field):
    """``re_z0,im_z0,re_g,im_g,swallow_time`` for a :class:`~loewnerlab.loewner.FlowField`."""
    out = []
    for z, g, ts in zip(field.z0.ravel(), field.g.ravel(), field.swallow_time.ravel()):
        if np.isnan(ts):
            out.append((z.real, z.imag, g.real, g.imag, ""))
        else:
            out.append((z.real, z.imag, "nan", "nan", ts))
    return out
