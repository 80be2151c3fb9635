"""Force on a small absorbing disk, and the size of the CM-derivative amplitude."""
from twistbeam import beam as bm
from twistbeam import forces as fc
from twistbeam import photoexcite as pe


def disk_table():
    for m_gamma in (-1, 1):
        beam = bm.BeamParams.from_pitch(0.3, m_gamma, 1)
        lam = beam.wavelength
        for frac in (0.001, 0.003, 0.01, 0.03, 0.1):
            disk = fc.DiskGeometry(frac * lam)
            f = fc.force_absorptive_disk(beam, disk)
            print(f"m_gamma={m_gamma:+d} R/lambda={frac:<6} F_z/(area I)={f / (disk.area * fc.on_axis_intensity(beam)):.6e}")


def cm_table():
    atom = pe.AtomConfig()
    beam = bm.BeamParams.from_pitch(0.2, 0, 1)
    lam = beam.wavelength
    for m_f in (-1, 1):
        final = pe.AtomicOrbital(2, 1, m_f)
        for width in (0.05, 0.1, 0.3, 1.0):
            ci = pe.gaussian_ring(0.8 * lam, width * lam)
            cf = pe.gaussian_ring(0.8 * lam, width * lam, m_R=-m_f)
            rel = pe.amplitude_lz(beam, atom, final, ci, cf).value
            cm = pe.amplitude_cm(beam, atom, final, ci, cf).value
            print(f"m_f={m_f:+d} width/lambda={width:<5} |M_cm/M_rel|={abs(cm / rel):.3e}")


if __name__ == "__main__":
    disk_table()
    cm_table()
