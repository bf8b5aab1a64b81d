//! CSV and manifest writers. All floats use 17 significant digits so repeated
//! runs of the same config produce byte-identical files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use quadwave::manifold::EnergyManifold;
use quadwave::observables::{QFunctionFrame, Spectrum, TimeSeries};
use quadwave::propagator::ClassicalState;
use quadwave::run::PacketFrame;
use sha2::{Digest, Sha256};

/// Round-trip float formatting: 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Collects produced files and writes the manifest at the end.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
    config_hash: String,
}

impl OutputDir {
    pub fn create(root: &Path, config_text: &str) -> Result<Self> {
        fs::create_dir_all(root)
            .with_context(|| format!("creating output directory {}", root.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(config_text.as_bytes());
        let config_hash = format!("{:x}", hasher.finalize());
        let mut dir = OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
            config_hash,
        };
        dir.write_raw("config.toml", config_text)?;
        Ok(dir)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn writer(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.root.join(name);
        let file =
            File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    pub fn write_raw(&mut self, name: &str, text: &str) -> Result<()> {
        let mut w = self.writer(name)?;
        w.write_all(text.as_bytes())?;
        Ok(())
    }

    /// `timeseries.csv` with the fixed column set.
    pub fn write_timeseries(&mut self, name: &str, s: &TimeSeries) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(
            w,
            "t,norm,energy,inversion,var_q,var_p,mean_q,mean_p,entropy,re_A,im_A,excitation"
        )?;
        for k in 0..s.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                fmt(s.times[k]),
                fmt(s.norm[k]),
                fmt(s.energy[k]),
                fmt(s.inversion[k]),
                fmt(s.var_q[k]),
                fmt(s.var_p[k]),
                fmt(s.mean_q[k]),
                fmt(s.mean_p[k]),
                fmt(s.entropy[k]),
                fmt(s.autocorrelation[k].re),
                fmt(s.autocorrelation[k].im),
                fmt(s.excitation[k]),
            )?;
        }
        Ok(())
    }

    /// `fidelity.csv` (t, fidelity) for twin runs.
    pub fn write_fidelity(&mut self, name: &str, times: &[f64], fidelity: &[f64]) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "t,fidelity")?;
        for (t, f) in times.iter().zip(fidelity) {
            writeln!(w, "{},{}", fmt(*t), fmt(*f))?;
        }
        Ok(())
    }

    /// `diagnostics_*.csv` (t, h_cor) for adiabatic runs.
    pub fn write_hcor(&mut self, name: &str, times: &[f64], h_cor: &[f64]) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "t,h_cor")?;
        for (t, h) in times.iter().zip(h_cor) {
            writeln!(w, "{},{}", fmt(*t), fmt(*h))?;
        }
        Ok(())
    }

    /// `qfunc_t<time>.csv` (alpha_re, alpha_im, Q).
    pub fn write_qfunction(&mut self, name: &str, frame: &QFunctionFrame) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "alpha_re,alpha_im,Q")?;
        for (i_im, &im) in frame.alpha_im.iter().enumerate() {
            for (i_re, &re) in frame.alpha_re.iter().enumerate() {
                writeln!(w, "{},{},{}", fmt(re), fmt(im), fmt(frame.value(i_re, i_im)))?;
            }
        }
        Ok(())
    }

    /// `packets.csv` (t, q, abs_up, abs_down), long format over all frames.
    pub fn write_packets(&mut self, name: &str, q: &[f64], frames: &[PacketFrame]) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "t,q,abs_up,abs_down")?;
        for frame in frames {
            for (k, &qv) in q.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt(frame.time),
                    fmt(qv),
                    fmt(frame.abs_up[k]),
                    fmt(frame.abs_down[k])
                )?;
            }
        }
        Ok(())
    }

    /// `spectrum.csv` (epsilon, power).
    pub fn write_spectrum(&mut self, name: &str, spec: &Spectrum) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "epsilon,power")?;
        for (e, p) in spec.epsilon.iter().zip(spec.power.iter()) {
            writeln!(w, "{},{}", fmt(*e), fmt(*p))?;
        }
        Ok(())
    }

    /// `curves.csv`: adiabatic/diabatic potential curves and angle derivatives.
    #[allow(clippy::too_many_arguments)]
    pub fn write_curves(
        &mut self,
        name: &str,
        q: &[f64],
        v_plus: &[f64],
        v_minus: &[f64],
        diab_upper: &[f64],
        diab_lower: &[f64],
        dtheta: &[f64],
        d2theta: &[f64],
    ) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "q,v_plus,v_minus,diabatic_plus,diabatic_minus,dtheta,d2theta")?;
        for k in 0..q.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt(q[k]),
                fmt(v_plus[k]),
                fmt(v_minus[k]),
                fmt(diab_upper[k]),
                fmt(diab_lower[k]),
                fmt(dtheta[k]),
                fmt(d2theta[k]),
            )?;
        }
        Ok(())
    }

    /// `trajectory_<sheet>.csv` (t, q, p).
    pub fn write_trajectory(
        &mut self,
        name: &str,
        dt: f64,
        stride: usize,
        traj: &[ClassicalState],
    ) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "t,q,p")?;
        for (k, s) in traj.iter().enumerate() {
            if k % stride == 0 || k == traj.len() - 1 {
                writeln!(w, "{},{},{}", fmt(k as f64 * dt), fmt(s.q), fmt(s.p))?;
            }
        }
        Ok(())
    }

    /// `contour_*.csv` (loop, q, p).
    pub fn write_contour(&mut self, name: &str, manifold: &EnergyManifold) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "loop,q,p")?;
        for (i, points) in manifold.loops.iter().enumerate() {
            for &(q, p) in points {
                writeln!(w, "{},{},{}", i, fmt(q), fmt(p))?;
            }
        }
        Ok(())
    }

    /// `revivals.csv` with one row per estimate.
    pub fn write_revivals(
        &mut self,
        name: &str,
        estimate: &quadwave::analytic::RevivalEstimate,
        measured: Option<f64>,
    ) -> Result<()> {
        let mut w = self.writer(name)?;
        writeln!(w, "estimate,value")?;
        if let Some(t) = estimate.t_r_adiabatic {
            writeln!(w, "adiabatic_formula,{}", fmt(t))?;
        } else {
            writeln!(w, "adiabatic_formula,invalid")?;
        }
        writeln!(w, "standard_formula,{}", fmt(estimate.t_r_standard))?;
        writeln!(w, "curvature_fit,{}", fmt(estimate.t_r_numeric_curvature))?;
        if estimate.curvature_anchored_off_center {
            writeln!(w, "curvature_anchor,off_center_minima")?;
        }
        if let Some(t) = measured {
            writeln!(w, "measured_pair_separation,{}", fmt(t))?;
        }
        Ok(())
    }

    /// Writes `manifest.txt` listing every produced file with the config hash;
    /// `failure` adds the FAILED marker for aborted runs.
    pub fn finish(mut self, failure: Option<&str>) -> Result<()> {
        let path = self.root.join("manifest.txt");
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "config_sha256 = {}", self.config_hash)?;
        if let Some(msg) = failure {
            writeln!(w, "FAILED: {msg}")?;
        }
        self.files.sort();
        for f in &self.files {
            writeln!(w, "{f}")?;
        }
        Ok(())
    }
}

/// Formats a snapshot time for a filename: shortest round-trip form,
/// `62.5 -> "62.5"`, `50.0 -> "50"`.
pub fn time_tag(t: f64) -> String {
    format!("{t}")
}
