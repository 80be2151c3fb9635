"""Amplitude-versus-impact-parameter scans for m_gamma = 0 and 1 (pitch 0.2 rad).

Writes one CSV per m_gamma and prints the curve features.
"""
import argparse
from pathlib import Path

from twistbeam import beam as bm
from twistbeam import cli
from twistbeam import photoexcite as pe


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--n-points", type=int, default=121)
    ap.add_argument("--pitch", type=float, default=0.2)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    atom = pe.AtomConfig()

    for m_gamma in (0, 1):
        path = out / f"amplitude_mgamma{m_gamma}.csv"
        cli.main(["scan-amplitude", "--m-gamma", str(m_gamma), "--lambda", "1", "--pitch", str(args.pitch),
                  "--nf", "2", "--lf", "1", "--mf", "-1", "--mf", "0", "--mf", "1",
                  "--b-max", "3", "--n-points", str(args.n_points), "-o", str(path)])
        beam = bm.BeamParams.from_pitch(args.pitch, m_gamma, 1)
        print(f"m_gamma={m_gamma}  ({path})")
        for m_f in (-1, 0, 1):
            final = pe.AtomicOrbital(2, 1, m_f)
            b_pk, v_pk = pe.locate_peak(beam, atom, final)
            zero = pe.locate_first_zero(beam, atom, final)
            print(f"  m_f={m_f:+d}  first peak b/lambda={b_pk:.4f} |M|={v_pk:.6e}  first zero b/lambda={zero}")


if __name__ == "__main__":
    main()
