"""On-axis Poynting flux and force for m_gamma = -Lambda beams over a range of pitch angles."""
import numpy as np

from twistbeam import beam as bm
from twistbeam import forces as fc
from twistbeam import verify as vf


def main():
    part = fc.ParticleResponse(0.3 + 0.7j)
    print(f"{'pitch':>6} {'S_z/I':>10} {'F_z/sI':>10} {'cos':>10} {'poynting':>10} {'spin-curl':>10}")
    for th in np.linspace(0.05, 1.4, 12):
        beam = bm.BeamParams.from_pitch(th, -1, 1)
        row = vf.tractor_row(beam, part)
        s_norm = row["s_z_fields"] / fc.on_axis_intensity(beam)
        print(f"{th:6.3f} {s_norm:10.6f} {row['f_z_ratio']:10.6f} {np.cos(th):10.6f} "
              f"{row['poynting_ratio']:10.6f} {row['spin_curl_ratio']:10.6f}")


if __name__ == "__main__":
    main()
