#!/usr/bin/env python3
"""Generate the committed statistics fixtures and their reference values.

Matrices are seeded synthetic data. Reference values come from pingouin
(rm_anova, sphericity, epsilon, pairwise_tests) and scipy (shapiro), and are
written to reference.json next to the CSV files. Run once; the outputs are
committed and the C++ suites only read them.

    python3 generate_reference.py
"""
import json
import os

import numpy as np
import pandas as pd
import pingouin as pg
import scipy
import scipy.stats as st

HERE = os.path.dirname(os.path.abspath(__file__))
LABELS = ["500000", "1000000", "2000000"]


def write_matrix(name, values, labels=LABELS):
    df = pd.DataFrame(values, columns=labels)
    path = os.path.join(HERE, name + ".csv")
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(labels) + "\n")
        for row in values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    return df


def write_sample(name, values):
    path = os.path.join(HERE, name + ".csv")
    with open(path, "w", newline="\n") as fh:
        fh.write("value\n")
        for v in values:
            fh.write(repr(float(v)) + "\n")


def reference_for(df):
    n, k = df.shape
    long = df.reset_index(names="subject").melt(
        id_vars="subject", var_name="condition", value_name="y")
    aov = pg.rm_anova(data=long, dv="y", within="condition", subject="subject",
                      correction=True, detailed=True, effsize="ng2")
    row = aov.iloc[0]
    ss_cond = float(row["SS"])
    ss_err = float(aov.iloc[1]["SS"])
    spher = pg.sphericity(df)
    eps = float(pg.epsilon(df, correction="gg"))
    out = {
        "n": n,
        "k": k,
        "anova": {
            "f": float(row["F"]),
            "df_num": int(row["DF"]),
            "df_den": int(aov.iloc[1]["DF"]),
            "p": float(row["p_unc"] if "p_unc" in row else row["p-unc"]),
            "eta_g_sq": float(row["ng2"]),
            "gg_epsilon": eps,
            "ss_conditions": ss_cond,
            "ss_error": ss_err,
        },
        "sphericity": {
            "w": float(spher.W),
            "chi_sq": float(spher.chi2),
            "df": int(spher.dof),
            "p": float(spher.pval),
        },
        "normality": [],
        "pairwise": [],
    }
    for col in df.columns:
        w, p = st.shapiro(df[col].to_numpy())
        out["normality"].append({"condition": col, "w": float(w), "p": float(p)})
    m = k * (k - 1) // 2
    for i in range(k):
        for j in range(i + 1, k):
            a, b = df.columns[i], df.columns[j]
            res = pg.ttest(df[a], df[b], paired=True)
            t = float(res["T"].iloc[0])
            p_raw = float(res["p_val"].iloc[0] if "p_val" in res else res["p-val"].iloc[0])
            out["pairwise"].append({
                "a": a, "b": b, "t": t, "df": n - 1,
                "p_raw": p_raw, "p_corrected": min(1.0, m * p_raw),
            })
    # GG-corrected p from pingouin's detailed table when present.
    for key in ("p_GG_corr", "p-GG-corr"):
        if key in aov.columns:
            out["anova"]["p_gg"] = float(row[key])
    return out


def main():
    rng = np.random.default_rng(20260115)
    matrices = {}

    # 1: strong monotone decline, PE-like magnitudes, subject offsets.
    subj = rng.normal(0.0, 0.004, size=(50, 1))
    base = np.array([0.060, 0.030, 0.015])
    matrices["matrix_01"] = base + subj + rng.normal(0, 0.002, size=(50, 3))

    # 2: non-spherical, one condition with inflated variance.
    x = rng.normal(10.0, 1.0, size=(50, 3))
    x[:, 2] = 10.5 + 4.0 * rng.standard_normal(50)
    matrices["matrix_02"] = x

    # 3: null, all conditions from one distribution.
    matrices["matrix_03"] = rng.normal(5.0, 1.0, size=(50, 3))

    # 4: power-like, increasing RMS watts with correlated subjects.
    subj = rng.normal(0.0, 4.0, size=(50, 1))
    matrices["matrix_04"] = (np.array([152.0, 158.0, 171.0]) + subj
                             + rng.normal(0, [1.5, 3.0, 5.0], size=(50, 3)))

    # 5: skewed errors, moderate effect.
    matrices["matrix_05"] = (np.array([1.0, 1.2, 1.1])
                             + rng.exponential(0.5, size=(50, 3))
                             + rng.normal(0, 0.3, size=(50, 1)))

    reference = {
        "generator": {
            "numpy": np.__version__, "scipy": scipy.__version__,
            "pingouin": pg.__version__, "seed": 20260115,
        },
        "matrices": {},
    }
    for name, values in matrices.items():
        df = write_matrix(name, values)
        reference["matrices"][name] = reference_for(df)

    # Small hand-computable design.
    hand = np.array([[1.0, 2.0, 4.0],
                     [2.0, 2.5, 5.0],
                     [3.0, 5.0, 5.5],
                     [4.0, 4.5, 7.5]])
    df = write_matrix("hand_4x3", hand, ["a", "b", "c"])
    reference["matrices"]["hand_4x3"] = reference_for(df)

    normal = rng.standard_normal(50)
    expo = rng.exponential(1.0, 50)
    write_sample("sw_normal_50", normal)
    write_sample("sw_exponential_50", expo)
    reference["shapiro"] = {}
    for name, sample in (("sw_normal_50", normal), ("sw_exponential_50", expo)):
        w, p = st.shapiro(sample)
        reference["shapiro"][name] = {"w": float(w), "p": float(p)}

    with open(os.path.join(HERE, "reference.json"), "w", newline="\n") as fh:
        json.dump(reference, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
