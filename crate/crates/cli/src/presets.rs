//! Built-in benchmark scenarios (fig1..fig16), each a bundle of one or more
//! panel configs executed into subdirectories of the output root.

/// A preset: name, one-line description, panels as `(subdir, toml)`.
/// Empty subdir means the panel writes at the output root.
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub sweep: bool,
    pub panels: &'static [(&'static str, &'static str)],
}

const FIG1_A: &str = r#"# adiabatic vs diabatic curves, single-well regime
[model]
kind = "rabi"
omega = 4.0
g0 = 0.5

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 0.0
record_stride = 1

[curves]
enabled = true

[output]
directory = "out/fig1/a"
"#;

const FIG1_B: &str = r#"[model]
kind = "rabi"
omega = 1.0
g0 = 1.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 0.0
record_stride = 1

[curves]
enabled = true

[output]
directory = "out/fig1/b"
"#;

const FIG1_C: &str = r#"[model]
kind = "rabi"
omega = 0.5
g0 = 1.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 0.0
record_stride = 1

[curves]
enabled = true

[output]
directory = "out/fig1/c"
"#;

const FIG1_D: &str = r#"[model]
kind = "rabi"
omega = 0.1
g0 = 1.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 0.0
record_stride = 1

[curves]
enabled = true

[output]
directory = "out/fig1/d"
"#;

const FIG3: &str = r#"# fidelity surface for a coherent field, strongly detuned both ways
[model]
omega = 10.0
g0 = 0.1

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 50.0
record_stride = 100

[sweep]
g0_values = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0]
omega_values = [10.0, 0.1]

[output]
directory = "out/fig3"
"#;

const FIG4_A: &str = r#"# Rabi oscillations, strong coupling / small atomic frequency
[model]
omega = 0.2
g0 = 2.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 32.0
record_stride = 25

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig4/a"
"#;

const FIG4_B: &str = r#"[model]
omega = 4.0
g0 = 2.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 32.0
record_stride = 25

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig4/b"
"#;


const FIG6: &str = r#"# collapse-revival comparison, adiabatic regime
[model]
omega = 5.0
g0 = 0.3

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 400.0
record_stride = 100

[compare]
models = ["rabi", "adiabatic", "jc"]

[observables]
revivals = true

[output]
directory = "out/fig6"
"#;

const FIG8: &str = r#"# collapse-revival comparison, diabatic regime
[model]
omega = 0.2
g0 = 2.0

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 50.0
record_stride = 25

[compare]
models = ["rabi", "adiabatic", "jc"]

[observables]
revivals = true

[output]
directory = "out/fig8"
"#;

const FIG11_AB: &str = r#"# Q-function evolution, detuned coherent state
[model]
omega = 5.0
g0 = 0.3

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 400.0
record_stride = 100

[compare]
models = ["rabi", "jc"]

[qfunction]
times = [0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0]

[output]
directory = "out/fig11/ab"
"#;

const FIG11_CD: &str = r#"# Q-function evolution, resonant strong coupling
[model]
omega = 1.0
g0 = 1.0

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 6.0
record_stride = 10

[compare]
models = ["rabi", "jc"]

[qfunction]
times = [0.0, 1.5, 3.0, 4.5, 6.0]

[output]
directory = "out/fig11/cd"
"#;

const FIG12: &str = r#"# classical sheet trajectories for the fig11(c) setup
[model]
kind = "rabi"
omega = 1.0
g0 = 1.0

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 0.0
record_stride = 1

[classical]
sheets = ["upper", "lower"]
q0 = 5.656854249492381
p0 = 0.0
t_final = 19.0

[output]
directory = "out/fig12"
"#;

const FIG13: &str = r#"# Fock-state Q-function blobs in the Rabi model
[model]
kind = "rabi"
omega = 1.0
g0 = 0.5

[initial]
field = "fock"
n = 6

[propagation]
dt = 0.001
t_final = 75.0
record_stride = 100

[qfunction]
times = [0.0, 50.0, 62.5, 75.0]

[output]
directory = "out/fig13"
"#;

const FIG14_A: &str = r#"# entanglement entropy, coherent input
[model]
omega = 5.0
g0 = 0.3

[initial]
field = "coherent"
nu_re = 3.0

[propagation]
dt = 0.001
t_final = 400.0
record_stride = 100

[compare]
models = ["rabi", "jc"]

[observables]
revivals = true

[output]
directory = "out/fig14/a"
"#;

const FIG14_B: &str = r#"# entanglement entropy, vacuum at resonance
[model]
omega = 1.0
g0 = 1.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 30.0
record_stride = 25

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig14/b"
"#;

const FIG15_A: &str = r#"# autocorrelation, resonant strong coupling
[model]
omega = 1.0
g0 = 1.0

[initial]
field = "coherent"
nu_re = 15.0

[propagation]
dt = 0.001
t_final = 120.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[observables]
revivals = true

[output]
directory = "out/fig15/a"
"#;

const FIG15_B: &str = r#"# autocorrelation, detuned weak coupling
[model]
omega = 5.0
g0 = 0.3

[initial]
field = "coherent"
nu_re = 15.0

[propagation]
dt = 0.001
t_final = 400.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[observables]
revivals = true

[output]
directory = "out/fig15/b"
"#;

pub fn presets() -> Vec<Preset> {
    vec![
        Preset {
            name: "fig1",
            description: "adiabatic and diabatic energy curves, four parameter sets",
            sweep: false,
            panels: &[("a", FIG1_A), ("b", FIG1_B), ("c", FIG1_C), ("d", FIG1_D)],
        },
        Preset {
            name: "fig2",
            description: "fidelity surface vs (t, g0), vacuum, Omega = 2 and 0.5",
            sweep: true,
            panels: &[("", FIG2_FIXED)],
        },
        Preset {
            name: "fig3",
            description: "fidelity surface vs (t, g0), coherent nu = 4, Omega = 10 and 0.1",
            sweep: true,
            panels: &[("", FIG3)],
        },
        Preset {
            name: "fig4",
            description: "Rabi oscillations with and without the RWA, vacuum",
            sweep: false,
            panels: &[("a", FIG4_A), ("b", FIG4_B)],
        },
        Preset {
            name: "fig5",
            description: "wave-packet amplitudes for the fig4(a) setup, n = 0 and 2",
            sweep: false,
            panels: FIG5_PANELS,
        },
        Preset {
            name: "fig6",
            description: "collapse-revival: Rabi vs adiabatic vs JC, Omega = 5, g0 = 0.3, nu = 4",
            sweep: false,
            panels: &[("", FIG6)],
        },
        Preset {
            name: "fig8",
            description: "collapse-revival in the diabatic regime, Omega = 0.2, g0 = 2, nu = 4",
            sweep: false,
            panels: &[("", FIG8)],
        },
        Preset {
            name: "fig10",
            description: "quadrature variance (squeezing) in four parameter sets",
            sweep: false,
            panels: FIG10_RENDERED,
        },
        Preset {
            name: "fig11",
            description: "Q-function evolution for coherent input, two regimes",
            sweep: false,
            panels: &[("ab", FIG11_AB), ("cd", FIG11_CD)],
        },
        Preset {
            name: "fig12",
            description: "classical phase-space trajectories on the two sheets",
            sweep: false,
            panels: &[("", FIG12)],
        },
        Preset {
            name: "fig13",
            description: "Fock-6 Q-function blob formation, Omega = 1, g0 = 0.5",
            sweep: false,
            panels: &[("", FIG13)],
        },
        Preset {
            name: "fig14",
            description: "entanglement entropy, coherent nu = 3 and vacuum inputs",
            sweep: false,
            panels: &[("a", FIG14_A), ("b", FIG14_B)],
        },
        Preset {
            name: "fig15",
            description: "autocorrelation |A(t)| for nu = 15, two parameter sets",
            sweep: false,
            panels: &[("a", FIG15_A), ("b", FIG15_B)],
        },
        Preset {
            name: "fig16",
            description: "autocorrelation power spectra of the fig15 runs",
            sweep: false,
            panels: FIG16_RENDERED,
        },
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}

// --- panels assembled at compile time below ---

const FIG2_FIXED: &str = r#"# adiabatic-approximation fidelity surface, vacuum input
[model]
omega = 2.0
g0 = 0.1

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 50.0
record_stride = 100

[sweep]
g0_values = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0]
omega_values = [2.0, 0.5]

[output]
directory = "out/fig2"
"#;

const FIG5_PANELS: &[(&str, &str)] = &[
    (
        "a",
        r#"[model]
kind = "rabi"
omega = 0.2
g0 = 2.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 32.0
record_stride = 100

[packets]
times = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0, 12.5, 13.0, 13.5, 14.0, 14.5, 15.0, 15.5, 16.0, 16.5, 17.0, 17.5, 18.0, 18.5, 19.0, 19.5, 20.0, 20.5, 21.0, 21.5, 22.0, 22.5, 23.0, 23.5, 24.0, 24.5, 25.0, 25.5, 26.0, 26.5, 27.0, 27.5, 28.0, 28.5, 29.0, 29.5, 30.0, 30.5, 31.0, 31.5, 32.0]

[output]
directory = "out/fig5/a"
"#,
    ),
    (
        "b",
        r#"[model]
kind = "rabi"
omega = 0.2
g0 = 2.0

[initial]
field = "fock"
n = 2

[propagation]
dt = 0.001
t_final = 32.0
record_stride = 100

[packets]
times = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0, 12.5, 13.0, 13.5, 14.0, 14.5, 15.0, 15.5, 16.0, 16.5, 17.0, 17.5, 18.0, 18.5, 19.0, 19.5, 20.0, 20.5, 21.0, 21.5, 22.0, 22.5, 23.0, 23.5, 24.0, 24.5, 25.0, 25.5, 26.0, 26.5, 27.0, 27.5, 28.0, 28.5, 29.0, 29.5, 30.0, 30.5, 31.0, 31.5, 32.0]

[output]
directory = "out/fig5/b"
"#,
    ),
    (
        "c",
        r#"[model]
kind = "jc"
omega = 0.2
g0 = 2.0

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 32.0
record_stride = 100

[packets]
times = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0, 12.5, 13.0, 13.5, 14.0, 14.5, 15.0, 15.5, 16.0, 16.5, 17.0, 17.5, 18.0, 18.5, 19.0, 19.5, 20.0, 20.5, 21.0, 21.5, 22.0, 22.5, 23.0, 23.5, 24.0, 24.5, 25.0, 25.5, 26.0, 26.5, 27.0, 27.5, 28.0, 28.5, 29.0, 29.5, 30.0, 30.5, 31.0, 31.5, 32.0]

[output]
directory = "out/fig5/c"
"#,
    ),
    (
        "d",
        r#"[model]
kind = "jc"
omega = 0.2
g0 = 2.0

[initial]
field = "fock"
n = 2

[propagation]
dt = 0.001
t_final = 32.0
record_stride = 100

[packets]
times = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0, 12.5, 13.0, 13.5, 14.0, 14.5, 15.0, 15.5, 16.0, 16.5, 17.0, 17.5, 18.0, 18.5, 19.0, 19.5, 20.0, 20.5, 21.0, 21.5, 22.0, 22.5, 23.0, 23.5, 24.0, 24.5, 25.0, 25.5, 26.0, 26.5, 27.0, 27.5, 28.0, 28.5, 29.0, 29.5, 30.0, 30.5, 31.0, 31.5, 32.0]

[output]
directory = "out/fig5/d"
"#,
    ),
];

const FIG10_RENDERED: &[(&str, &str)] = &[
    (
        "a",
        r#"[model]
omega = 0.2
g0 = 0.1

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 50.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig10/a"
"#,
    ),
    (
        "b",
        r#"[model]
omega = 2.0
g0 = 0.1

[initial]
field = "fock"
n = 0

[propagation]
dt = 0.001
t_final = 50.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig10/b"
"#,
    ),
    (
        "c",
        r#"[model]
omega = 5.0
g0 = 0.3

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 400.0
record_stride = 100

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig10/c"
"#,
    ),
    (
        "d",
        r#"[model]
omega = 1.0
g0 = 0.2

[initial]
field = "coherent"
nu_re = 4.0

[propagation]
dt = 0.001
t_final = 100.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[output]
directory = "out/fig10/d"
"#,
    ),
];

const FIG16_RENDERED: &[(&str, &str)] = &[
    (
        "a",
        r#"[model]
omega = 1.0
g0 = 1.0

[initial]
field = "coherent"
nu_re = 15.0

[propagation]
dt = 0.001
t_final = 120.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[observables]
spectrum = true

[output]
directory = "out/fig16/a"
"#,
    ),
    (
        "b",
        r#"[model]
omega = 5.0
g0 = 0.3

[initial]
field = "coherent"
nu_re = 15.0

[propagation]
dt = 0.001
t_final = 400.0
record_stride = 50

[compare]
models = ["rabi", "jc"]

[observables]
spectrum = true

[output]
directory = "out/fig16/b"
"#,
    ),
];
