//! Report schema, anchor manifest, and emission in json / csv / text.

use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

/// Formula anchors for every named check; "plumbing" marks records that
/// exist for harness bookkeeping only.
pub fn anchor_manifest() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        (
            "interval-moyal-coefficients",
            "rho^(2)H(0) = 24 s^2 H''(0) + s^4 H''''(0); rho^(3)H(0) = 1080 s^2 H'' + 120 s^4 H'''' + s^6 H^(6); s = eps - conj(eps)",
        ),
        ("interval-leading-law", "leading coefficient of rho^(m)H(0) is m^2 (2m-1)!"),
        (
            "bidisc-moyal-coefficients",
            "rho^(1)(f x conj g)(0) = -|1-a|^2 f'(0) conj(g'(0)); rho^(2) = -|1-a|^2/2 [4(1+|a|^2) f' conj g' - |1-a|^2 f'' conj g'']; rho^(3) = -|1-a|^2/6 [36(1+|a|^2+|a|^4) f' conj g' - 18|1-a|^2(1+|a|^2) f'' conj g'' + |1-a|^4 f''' conj g''']",
        ),
        (
            "flat-line-coefficients",
            "1/[nu]_m = Gamma(m+1/2)/(Gamma(1/2) (c nu)^m), c = 1 - Re(eps^2)",
        ),
        ("flat-line-expansion", "sum_m rho^m/[nu]_m = exp(-d^2/(2 nu))"),
        ("flat-rho-closed-form", "rho^m = (eps - conj eps)^{2m}/(2m)! d^{2m}"),
        ("flat-plane-coefficients", "[nu]_m = nu^m |1-a|^{2m}"),
        (
            "flat-plane-closed-form",
            "rho^m = (-1)^m/m! |1-a|^{2m} (d x dbar)^m",
        ),
        ("flat-plane-expansion", "sum_m rho^m/[nu]_m = exp(-(d x dbar)/nu)"),
        ("bidisc-coefficients-a0", "[nu]_m = Gamma(nu+m)/Gamma(nu) = (nu)_m"),
        (
            "bidisc-coefficients-a-minus1",
            "1/[nu]_m = 2/(2nu-1)_m 2F1(2nu-1, m+1; m+2nu-1; -1)",
        ),
        (
            "interval-coefficients-eps-i",
            "1/[nu]_m = Gamma(m+1/2)Gamma(nu-1)/Gamma(m+nu-1/2) 2F1(m+1/2, nu-1; m+nu-1/2; -1), normalized to [nu]_0 = 1",
        ),
        ("coefficient-dual-evaluation", "quadrature and closed-form 1/[nu]_m agree"),
        ("expansion-remainder-order", "rho_nu H ~ sum_m rho^m H/[nu]_m"),
        ("gauge-independence", "the expansion sum is independent of the fiber parameter"),
        ("kernel-invariance", "B_nu(g z) = B_nu(z) for all g in G_R"),
        ("chart-jacobian", "det Phi'(0,y) = det(I - Q_y)"),
        ("chart-derivative", "Phi'(0,y)(xi, eta) = xi + eta - {y xi y}"),
        (
            "restriction-duality",
            "int h^{(nu-p)/2} conj(G) rho_nu F dx = int h^{-p} B_nu conj(G/I_nu) F dz",
        ),
        ("expectation-duality", "int h^{-p/2} psi_nu F dx = int h^{-p} B_nu F dz"),
        (
            "moyal-duality",
            "int h^{(nu-p)/2} conj(G) rho^m H dx = int h^{-p/2} psi^m(conj(G/I_nu) H) dx",
        ),
        (
            "catalog-dimensions",
            "d = r(r-1)a + rb + rc + r (type A: r(r-1)/2 a + r) = r_C(r_C-1)/2 a_C + r_C b_C + r_C; p = (r_C-1) a_C + b_C + 2",
        ),
        ("catalog-d2-skip", "the D_2 family carries two multiplicities a instead of one"),
        ("plumbing", "harness bookkeeping"),
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub computed: String,
    pub expected: String,
    pub provenance: String,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub single_thread: bool,
    pub wall_clock_secs: f64,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(command: &str, seed: u64, single_thread: bool) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            single_thread,
            wall_clock_secs: 0.0,
            checks: Vec::new(),
            passed: 0,
            failed: 0,
        }
    }

    pub fn push(&mut self, rec: CheckRecord) {
        debug_assert!(
            anchor_manifest().contains_key(rec.name.as_str()) || rec.provenance == "plumbing",
            "check {} lacks an anchor manifest entry",
            rec.name
        );
        if rec.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checks.push(rec);
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,computed,expected,provenance,tolerance,pass,anchor\n");
        for r in &self.checks {
            s.push_str(&format!(
                "{},{},{},{},{:e},{},\"{}\"\n",
                r.name,
                r.computed.replace(',', ";"),
                r.expected.replace(',', ";"),
                r.provenance,
                r.tolerance,
                r.pass,
                r.anchor.replace('"', "'")
            ));
        }
        s.push_str(&format!(
            "summary,{} passed; {} failed,,plumbing,0,{},\"\"\n",
            self.passed,
            self.failed,
            self.all_pass()
        ));
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "report: {} (schema v{}, seed {}, single-thread {})\n",
            self.command, self.schema_version, self.seed, self.single_thread
        );
        for r in &self.checks {
            s.push_str(&format!(
                "  [{}] {:<36} computed {} | expected {} | tol {:.1e} ({})\n",
                if r.pass { "pass" } else { "FAIL" },
                r.name,
                r.computed,
                r.expected,
                r.tolerance,
                r.provenance,
            ));
        }
        s.push_str(&format!(
            "{} checks: {} passed, {} failed; wall clock {:.2}s\n",
            self.checks.len(),
            self.passed,
            self.failed,
            self.wall_clock_secs
        ));
        s
    }

    pub fn render(&self, format: &str) -> String {
        match format {
            "json" => self.to_json(),
            "csv" => self.to_csv(),
            _ => self.to_text(),
        }
    }
}
