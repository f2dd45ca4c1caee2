//! The worked examples on sharing a function, as executable checks.

use meroshare::local::{Sense, SharingMode, Weight};

/// Region used for every entry.
pub const CORPUS_REGION: &str = "-7,7,-1,1";

#[derive(Clone, Debug)]
pub enum Expected {
    Shares,
    /// Fails exactly at these points.
    FailsAt(Vec<&'static str>),
}

#[derive(Clone, Debug)]
pub enum ExpectedTransfer {
    Holds,
    FailsAt(Vec<&'static str>),
    PreconditionFails,
}

#[derive(Clone, Debug)]
pub enum Check {
    /// Sharing of `alpha` by `f` and `g` under `mode`.
    Share {
        label: &'static str,
        f: &'static str,
        g: &'static str,
        alpha: &'static str,
        mode: SharingMode,
        expect: Expected,
    },
    /// Whether `f/alpha` and `g/alpha` share the value 1 under `mode`.
    Transfer { mode: SharingMode, expect: ExpectedTransfer },
    /// Value-sense verdicts agree before and after the map `[a, b, c, d]`.
    MobiusConsistent { map: [&'static str; 4], weight: Weight },
    /// The local order of `expr` at `point`, as displayed.
    Order { expr: &'static str, point: &'static str, expect: &'static str },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub f: &'static str,
    pub g: &'static str,
    pub alpha: &'static str,
    pub region: &'static str,
    pub checks: Vec<Check>,
}

fn kpi() -> Vec<&'static str> {
    vec!["-2*pi", "-pi", "0", "pi", "2*pi"]
}

fn entry(id: &str, f: &'static str, g: &'static str, alpha: &'static str, checks: Vec<Check>) -> CorpusEntry {
    CorpusEntry { id: id.to_string(), f, g, alpha, region: CORPUS_REGION, checks }
}

fn share(
    label: &'static str,
    f: &'static str,
    g: &'static str,
    alpha: &'static str,
    mode: SharingMode,
    expect: Expected,
) -> Check {
    Check::Share { label, f, g, alpha, mode, expect }
}

const VAN: Sense = Sense::Vanishing;
const VAL: Sense = Sense::Value;

const SINE_POWERS: [(&str, &str, &str); 4] = [
    ("sin(z) + sin(z)*exp(z^2)", "sin(z) + sin(z)^2*exp(z^2)", "sin(z)"),
    ("sin(z)^2 + sin(z)^2*exp(z^2)", "sin(z)^2 + sin(z)^3*exp(z^2)", "sin(z)^2"),
    ("sin(z)^3 + sin(z)^3*exp(z^2)", "sin(z)^3 + sin(z)^4*exp(z^2)", "sin(z)^3"),
    ("sin(z)^4 + sin(z)^4*exp(z^2)", "sin(z)^4 + sin(z)^5*exp(z^2)", "sin(z)^4"),
];

pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();

    let (f, g, a) = ("1/z + exp(z)", "1/z - exp(z)/z", "1/z");
    out.push(entry(
        "Example 1",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::cm(VAN), Expected::Shares),
            share("f, g, alpha", f, g, a, SharingMode::im(VAL), Expected::FailsAt(vec!["0"])),
        ],
    ));

    let (f, g, a) = ("z + z^2*exp(z)", "z + z^3*exp(z)", "z");
    let (rf, rg, ra) = ("1/(z + z^2*exp(z))", "1/(z + z^3*exp(z))", "1/z");
    out.push(entry(
        "Example 2",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::im(VAN), Expected::Shares),
            share("1/f, 1/g, 1/alpha", rf, rg, ra, SharingMode::im(VAN), Expected::FailsAt(vec!["0"])),
            Check::MobiusConsistent { map: ["0", "1", "1", "0"], weight: Weight::Finite(0) },
        ],
    ));

    let (f, g, a) = ("1/z + exp(z)", "1/z - exp(z)/z", "1/z");
    let (rf, rg, ra) = ("1/(1/z + exp(z))", "1/(1/z - exp(z)/z)", "z");
    out.push(entry(
        "Example 3",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::cm(VAN), Expected::Shares),
            share("1/f, 1/g, 1/alpha", rf, rg, ra, SharingMode::im(VAN), Expected::FailsAt(vec!["0"])),
            share("1/f, 1/g, 1/alpha", rf, rg, ra, SharingMode::im(VAL), Expected::FailsAt(vec!["0"])),
            Check::Order { expr: "1/(1/z + exp(z)) - z", point: "0", expect: "zero of order 2" },
            Check::Order { expr: "1/(1/z - exp(z)/z) - z", point: "0", expect: "regular, value -1" },
        ],
    ));

    let (f, g, a) = ("1/z + exp(z)", "1/z + exp(z)/z", "1/z");
    let (rf, rg, ra) = ("1/(1/z + exp(z))", "1/(1/z + exp(z)/z)", "z");
    out.push(entry(
        "Example 4",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::cm(VAN), Expected::Shares),
            share("1/f, 1/g, 1/alpha", rf, rg, ra, SharingMode::im(VAN), Expected::Shares),
            share("1/f, 1/g, 1/alpha", rf, rg, ra, SharingMode::cm(VAN), Expected::FailsAt(vec!["0"])),
        ],
    ));

    out.push(entry(
        "Example 5",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::cm(VAN), Expected::Shares),
            Check::Transfer { mode: SharingMode::cm(VAN), expect: ExpectedTransfer::FailsAt(vec!["0"]) },
            Check::Transfer { mode: SharingMode::im(VAN), expect: ExpectedTransfer::FailsAt(vec!["0"]) },
            Check::Transfer { mode: SharingMode::cm(VAL), expect: ExpectedTransfer::PreconditionFails },
        ],
    ));

    let (f, g, a) = ("1/sin(z) + exp(z^2)", "(1 + exp(z^2))/sin(z)", "1/sin(z)");
    out.push(entry(
        "Example 6",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::cm(VAN), Expected::Shares),
            Check::Transfer { mode: SharingMode::cm(VAN), expect: ExpectedTransfer::FailsAt(kpi()) },
            Check::Transfer { mode: SharingMode::im(VAN), expect: ExpectedTransfer::FailsAt(kpi()) },
        ],
    ));

    let (f, g, a) = ("1/z + exp(z)", "1/z + z*exp(z)", "1/z");
    out.push(entry(
        "Example 7",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::im(VAL), Expected::Shares),
            share("f, g, alpha", f, g, a, SharingMode::weighted(VAL, 1), Expected::Shares),
            share("f, g, alpha", f, g, a, SharingMode::cm(VAL), Expected::FailsAt(vec!["0"])),
            share("f, g, alpha", f, g, a, SharingMode::im(VAN), Expected::FailsAt(vec!["0"])),
            Check::Order { expr: "1/(1/z + exp(z)) - z", point: "0", expect: "zero of order 2" },
            Check::Order { expr: "1/(1/z + z*exp(z)) - z", point: "0", expect: "zero of order 3" },
        ],
    ));

    let (f, g, a) = ("1/z + exp(z)", "1/z + exp(z)/z", "1/z");
    out.push(entry(
        "Example 8",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::cm(VAN), Expected::Shares),
            share("f, g, alpha", f, g, a, SharingMode::cm(VAL), Expected::FailsAt(vec!["0"])),
            share("f, g, alpha", f, g, a, SharingMode::im(VAL), Expected::Shares),
        ],
    ));

    let (f, g, a) = SINE_POWERS[0];
    out.push(entry(
        "Example 9",
        f,
        g,
        a,
        vec![
            share("f, g, alpha", f, g, a, SharingMode::im(VAN), Expected::Shares),
            share("f, g, alpha", f, g, a, SharingMode::im(VAL), Expected::Shares),
            Check::Transfer { mode: SharingMode::im(VAL), expect: ExpectedTransfer::FailsAt(kpi()) },
            Check::Transfer { mode: SharingMode::im(VAN), expect: ExpectedTransfer::FailsAt(kpi()) },
        ],
    ));

    for (m, &(f, g, a)) in SINE_POWERS.iter().enumerate() {
        let m = m as u32;
        out.push(entry(
            &format!("Example 10 (m = {m})"),
            f,
            g,
            a,
            vec![
                share("f, g, alpha", f, g, a, SharingMode::weighted(VAN, m), Expected::Shares),
                share("f, g, alpha", f, g, a, SharingMode::weighted(VAL, m), Expected::Shares),
                Check::Transfer { mode: SharingMode::weighted(VAL, m), expect: ExpectedTransfer::FailsAt(kpi()) },
                Check::Transfer { mode: SharingMode::weighted(VAN, m), expect: ExpectedTransfer::FailsAt(kpi()) },
            ],
        ));
    }

    let (f, g) = ("1 + exp(z^2)", "1 + exp(z^2)/sin(z)");
    let (af, ag, a) = ("sin(z)*(1 + exp(z^2))", "sin(z)*(1 + exp(z^2)/sin(z))", "sin(z)");
    out.push(entry(
        "Example 11",
        f,
        g,
        "1",
        vec![
            share("f, g, 1", f, g, "1", SharingMode::cm(VAN), Expected::Shares),
            share("f, g, 1", f, g, "1", SharingMode::cm(VAL), Expected::Shares),
            share("alpha*f, alpha*g, alpha", af, ag, a, SharingMode::im(VAN), Expected::FailsAt(kpi())),
            share("alpha*f, alpha*g, alpha", af, ag, a, SharingMode::im(VAL), Expected::FailsAt(kpi())),
        ],
    ));

    out
}
