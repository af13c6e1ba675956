//! Entropy calculus over labeled subsystems.
//!
//! Joint, conditional, mutual, conditional-mutual, and ternary-mutual
//! entropies, plus assembly of tripartite entropic Venn diagrams. All
//! quantities are in bits. Conditional entries may be negative (that is the
//! physics of entanglement, not an error), and the ternary center may be
//! negative as well; nothing here clamps them.
//!
//! Every combination formula below is evaluated from marginal von Neumann
//! entropies, each obtained by partial trace and eigendecomposition of the
//! joint density matrix.

use crate::error::{Error, Result};
use crate::tensor::DensityOperator;

fn check_disjoint(sets: &[&[&str]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::EmptySelection);
        }
        for b in &sets[..i] {
            if let Some(l) = a.iter().find(|l| b.contains(l)) {
                return Err(Error::OverlappingLabels(l.to_string()));
            }
        }
    }
    Ok(())
}

fn union<'a>(sets: &[&[&'a str]]) -> Vec<&'a str> {
    let mut out = Vec::new();
    for s in sets {
        out.extend_from_slice(s);
    }
    out
}

/// `S(subset)`: von Neumann entropy of the marginal on `subset`, in bits.
pub fn joint_entropy(rho: &DensityOperator, subset: &[&str]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySelection);
    }
    rho.partial_trace(subset)?.entropy_bits()
}

/// `S(A:B) = S(A) + S(B) - S(AB)`.
pub fn mutual_entropy(rho: &DensityOperator, a: &[&str], b: &[&str]) -> Result<f64> {
    check_disjoint(&[a, b])?;
    Ok(joint_entropy(rho, a)? + joint_entropy(rho, b)? - joint_entropy(rho, &union(&[a, b]))?)
}

/// `S(A|C) = S(AC) - S(C)`; may be negative for entangled states.
pub fn conditional_entropy(rho: &DensityOperator, a: &[&str], c: &[&str]) -> Result<f64> {
    check_disjoint(&[a, c])?;
    Ok(joint_entropy(rho, &union(&[a, c]))? - joint_entropy(rho, c)?)
}

/// `S(A:B|C) = S(AC) + S(BC) - S(C) - S(ABC)`; non-negative by strong
/// subadditivity.
pub fn conditional_mutual(
    rho: &DensityOperator,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    check_disjoint(&[a, b, c])?;
    Ok(joint_entropy(rho, &union(&[a, c]))? + joint_entropy(rho, &union(&[b, c]))?
        - joint_entropy(rho, c)?
        - joint_entropy(rho, &union(&[a, b, c]))?)
}

/// `S(A:B:C)`: the inclusion-exclusion center,
/// `S(A)+S(B)+S(C) - S(AB)-S(AC)-S(BC) + S(ABC)`. Vanishes for tripartite
/// pure states; may be negative in general.
pub fn ternary_mutual(rho: &DensityOperator, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    check_disjoint(&[a, b, c])?;
    Ok(joint_entropy(rho, a)? + joint_entropy(rho, b)? + joint_entropy(rho, c)?
        - joint_entropy(rho, &union(&[a, b]))?
        - joint_entropy(rho, &union(&[a, c]))?
        - joint_entropy(rho, &union(&[b, c]))?
        + joint_entropy(rho, &union(&[a, b, c]))?)
}

/// The seven entries of a tripartite entropic Venn diagram, in bits.
///
/// Entries are named after the regions: `c_*` are the conditional
/// (unshared) areas, `m_*` the pairwise conditional-mutual overlaps, and
/// `center` the ternary mutual entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct VennDiagram3 {
    labels: [String; 3],
    /// `S(A|BC)`
    pub c_a: f64,
    /// `S(B|AC)`
    pub c_b: f64,
    /// `S(C|AB)`
    pub c_c: f64,
    /// `S(A:B|C)`
    pub m_ab: f64,
    /// `S(A:C|B)`
    pub m_ac: f64,
    /// `S(B:C|A)`
    pub m_bc: f64,
    /// `S(A:B:C)`
    pub center: f64,
}

impl VennDiagram3 {
    pub fn labels(&self) -> [&str; 3] {
        [&self.labels[0], &self.labels[1], &self.labels[2]]
    }

    /// Sum of all seven entries; equals `S(ABC)`.
    pub fn total(&self) -> f64 {
        self.c_a + self.c_b + self.c_c + self.m_ab + self.m_ac + self.m_bc + self.center
    }

    /// Sum of the regions inside circle A; equals the marginal `S(A)`.
    pub fn circle_a(&self) -> f64 {
        self.c_a + self.m_ab + self.m_ac + self.center
    }

    pub fn circle_b(&self) -> f64 {
        self.c_b + self.m_ab + self.m_bc + self.center
    }

    pub fn circle_c(&self) -> f64 {
        self.c_c + self.m_ac + self.m_bc + self.center
    }

    /// Flat `key = value` text form, one entry per line.
    pub fn to_kv_text(&self) -> String {
        let [a, b, c] = self.labels();
        let mut out = String::new();
        out.push_str(&format!("S({a}|{b} {c}) = {:.16e}\n", self.c_a));
        out.push_str(&format!("S({b}|{a} {c}) = {:.16e}\n", self.c_b));
        out.push_str(&format!("S({c}|{a} {b}) = {:.16e}\n", self.c_c));
        out.push_str(&format!("S({a}:{b}|{c}) = {:.16e}\n", self.m_ab));
        out.push_str(&format!("S({a}:{c}|{b}) = {:.16e}\n", self.m_ac));
        out.push_str(&format!("S({b}:{c}|{a}) = {:.16e}\n", self.m_bc));
        out.push_str(&format!("S({a}:{b}:{c}) = {:.16e}\n", self.center));
        out
    }
}

/// Assembles the tripartite Venn diagram for three single labels.
///
/// Any remaining subsystems of `rho` are traced out first, so the three
/// labels together with the discarded ones need not partition the space by
/// themselves.
pub fn venn3(rho: &DensityOperator, a: &str, b: &str, c: &str) -> Result<VennDiagram3> {
    check_disjoint(&[&[a], &[b], &[c]])?;
    let marginal = rho.partial_trace(&[a, b, c])?;

    let s_a = joint_entropy(&marginal, &[a])?;
    let s_b = joint_entropy(&marginal, &[b])?;
    let s_c = joint_entropy(&marginal, &[c])?;
    let s_ab = joint_entropy(&marginal, &[a, b])?;
    let s_ac = joint_entropy(&marginal, &[a, c])?;
    let s_bc = joint_entropy(&marginal, &[b, c])?;
    let s_abc = marginal.entropy_bits()?;

    Ok(VennDiagram3 {
        labels: [a.to_string(), b.to_string(), c.to_string()],
        c_a: s_abc - s_bc,
        c_b: s_abc - s_ac,
        c_c: s_abc - s_ab,
        m_ab: s_ac + s_bc - s_c - s_abc,
        m_ac: s_ab + s_bc - s_b - s_abc,
        m_bc: s_ab + s_ac - s_a - s_abc,
        center: s_a + s_b + s_c - s_ab - s_ac - s_bc + s_abc,
    })
}
