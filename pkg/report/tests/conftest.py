import json
import os

import numpy as np
import pytest

CSV_HEADER = (
    "t,l2_p,l2_u,l2_s,h3_p,h3_u,h3_s,h2_grad_p,"
    "l2_dt,min_total_p,cross_low,cross_high,h3fun,m_of_t"
)


def write_run_dir(path, times, columns, label=None, fits=None):
    """Write a minimal run directory with the solver's CSV schema.

    ``columns`` maps column name -> array; anything missing is filled
    with ones (positive, so refits stay well-defined).
    """
    os.makedirs(path, exist_ok=True)
    names = CSV_HEADER.split(",")
    data = {name: np.ones_like(np.asarray(times, dtype=float)) for name in names}
    data["t"] = np.asarray(times, dtype=float)
    for name, values in columns.items():
        data[name] = np.asarray(values, dtype=float)
    lines = [CSV_HEADER]
    for i in range(len(times)):
        lines.append(",".join(format(float(data[n][i]), ".17g") for n in names))
    with open(os.path.join(path, "series.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    meta = {"label": label or os.path.basename(str(path)), "kind": "synthetic"}
    with open(os.path.join(path, "meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh)
    if fits is not None:
        with open(os.path.join(path, "fits.json"), "w", encoding="utf-8") as fh:
            json.dump(fits, fh)
    return str(path)


@pytest.fixture
def power_law_run(tmp_path):
    times = np.linspace(1.0, 200.0, 60)
    values = 3.0 * (1.0 + times) ** -1.25
    return write_run_dir(tmp_path / "plaw", times, {"l2_u": values, "l2_p": values},
                         label="plaw")
