use super::{Scenario, ScenarioKind};
use crate::identical::Statistics;
use crate::model::{Environment, GaussianPacket, Grid};

/// A named, ready-to-run scenario.
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub build: fn() -> Scenario,
}

pub const PRESETS: [Preset; 8] = [
    Preset {
        name: "fig1",
        summary: "arrival times at X=0; sigma0=1, x0=-5, p0=0.5; gamma in {0.05,0.1,0.15,0.2} x kT in {1,5,10}",
        build: fig1,
    },
    Preset {
        name: "fig2",
        summary: "cat decoherence function; sigma0=1, x0=5, p0=-2; kT=1 with gamma in {0.005,0.01,0.015,0.05}, gamma=0.05 with kT in {2,5,8}",
        build: fig2,
    },
    Preset {
        name: "fig3",
        summary: "stretched cat attenuation; sigma0=1, x0=5, p0=-2, gamma=0.005; kT in {1,5}, eta in {0,1,2,3}",
        build: fig3,
    },
    Preset {
        name: "fig4",
        summary: "cat density field; sigma0=1, x0=5, p0=-2; kT=1 with gamma in {1e-4,1e-3,3e-3,1e-2}, plus the closed system",
        build: fig4,
    },
    Preset {
        name: "fig5",
        summary: "Bohmian trajectories of the cat; sigma0=1, x0=5, p0=-2; kT=1 with gamma in {0.001,0.05}",
        build: fig5,
    },
    Preset {
        name: "fig6",
        summary: "single-particle density of two particles in cat states x0=+-5, widths 1 and 0.5; closed, kT=10 with gamma in {0.2,0.4}; t in {0.1,0.5,2}",
        build: fig6,
    },
    Preset {
        name: "fig7",
        summary: "joint density with one particle at the origin, same states as fig6; closed, gamma=0.4 with kT in {15,25}; t in {0.5,1,1.5}",
        build: fig7,
    },
    Preset {
        name: "fig8",
        summary: "released plane wave, k=1; gamma=1e-4 with kT in {0,1,2,4}, kT=2 with gamma in {5e-5,1.5e-4}",
        build: fig8,
    },
];

pub fn preset(name: &str) -> Option<Scenario> {
    PRESETS.iter().find(|p| p.name == name).map(|p| (p.build)())
}

fn env(gamma: f64, kt: f64) -> Environment {
    Environment { gamma, kt }
}

fn packet(x0: f64, p0: f64, sigma0: f64, eta: f64) -> GaussianPacket {
    GaussianPacket { x0, p0, sigma0, eta }
}

fn grid(min: f64, max: f64, count: usize) -> Option<Grid> {
    Some(Grid { min, max, count })
}

fn cat_packet() -> GaussianPacket {
    packet(5.0, -2.0, 1.0, 0.0)
}

fn fig1() -> Scenario {
    let mut s = Scenario::new("fig1", ScenarioKind::Arrival);
    s.environments = [0.05, 0.1, 0.15, 0.2]
        .iter()
        .flat_map(|&g| [1.0, 5.0, 10.0].map(|kt| env(g, kt)))
        .collect();
    s.packets = vec![packet(-5.0, 0.5, 1.0, 0.0)];
    s.time = grid(0.0, 40.0, 801);
    s.detector = Some(0.0);
    s
}

fn fig2() -> Scenario {
    let mut s = Scenario::new("fig2", ScenarioKind::Cat);
    s.environments = vec![
        env(0.005, 1.0),
        env(0.01, 1.0),
        env(0.015, 1.0),
        env(0.05, 1.0),
        env(0.05, 2.0),
        env(0.05, 5.0),
        env(0.05, 8.0),
    ];
    s.packets = vec![cat_packet()];
    s.time = grid(0.0, 100.0, 1001);
    s
}

fn fig3() -> Scenario {
    let mut s = Scenario::new("fig3", ScenarioKind::StretchCat);
    s.environments = vec![env(0.005, 1.0), env(0.005, 5.0)];
    s.packets = [0.0, 1.0, 2.0, 3.0].map(|eta| packet(5.0, -2.0, 1.0, eta)).to_vec();
    s.time = grid(0.0, 50.0, 501);
    s
}

fn fig4() -> Scenario {
    let mut s = Scenario::new("fig4", ScenarioKind::Cat);
    s.environments = vec![env(0.0, 0.0), env(1e-4, 1.0), env(1e-3, 1.0), env(3e-3, 1.0), env(1e-2, 1.0)];
    s.packets = vec![cat_packet()];
    s.space = grid(-15.0, 15.0, 601);
    s.time = grid(0.0, 10.0, 101);
    s.notes = vec!["axis ranges x in [-15, 15], t in [0, 10] chosen to frame the interference region".into()];
    s
}

fn fig5() -> Scenario {
    let mut s = Scenario::new("fig5", ScenarioKind::Trajectories);
    s.environments = vec![env(0.001, 1.0), env(0.05, 1.0)];
    s.packets = vec![cat_packet()];
    s.time = grid(0.0, 2.0, 201);
    s.seeds_per_branch = Some(20);
    s.step = Some(1e-3);
    s.notes = vec!["seeds at the midpoint quantiles of each branch, plus the two branch centers".into()];
    s
}

fn identical(name: &str, kind: ScenarioKind, envs: Vec<Environment>, times: Vec<f64>) -> Scenario {
    let mut s = Scenario::new(name, kind);
    s.environments = envs;
    // each one-particle state is the packet plus its mirror image
    s.packets = vec![packet(5.0, 0.0, 1.0, 0.0), packet(5.0, 0.0, 0.5, 0.0)];
    s.space = grid(-15.0, 15.0, 601);
    s.snapshots = times;
    s.statistics = Statistics::ALL.to_vec();
    s
}

fn fig6() -> Scenario {
    identical(
        "fig6",
        ScenarioKind::IdenticalSingle,
        vec![env(0.0, 0.0), env(0.2, 10.0), env(0.4, 10.0)],
        vec![0.1, 0.5, 2.0],
    )
}

fn fig7() -> Scenario {
    identical(
        "fig7",
        ScenarioKind::IdenticalJoint,
        vec![env(0.0, 0.0), env(0.4, 15.0), env(0.4, 25.0)],
        vec![0.5, 1.0, 1.5],
    )
}

fn fig8() -> Scenario {
    let mut s = Scenario::new("fig8", ScenarioKind::Shutter);
    s.environments = vec![
        env(1e-4, 0.0),
        env(1e-4, 1.0),
        env(1e-4, 2.0),
        env(1e-4, 4.0),
        env(5e-5, 2.0),
        env(1.5e-4, 2.0),
    ];
    s.wavenumber = Some(1.0);
    s.space = grid(0.0, 20.0, 81);
    s.time = grid(10.0, 50.0, 81);
    s.trace_x = Some(10.0);
    s.profile_t = Some(50.0);
    s
}
