use num_traits::Num;

/// Outcome of checking the recursive inequality
/// `a_{n+2} + αβ a_n ≥ γ a_{n+1}` on a finite sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthVerdict<T> {
    pub holds: bool,
    /// `α` when the hypotheses hold, a lower bound for `liminf a_n^{1/n}`
    /// provided the inequality persists beyond the checked window.
    pub certified_lower: Option<T>,
}

/// Checks `α ≥ 0`, `γ ≥ α + β`, `a_n ≥ 0`, `a_1 > β a_0` and the inequality on
/// every window of three consecutive terms. Together these give the telescoped
/// bound `a_{n+2} - β a_{n+1} ≥ α^{n+1} (a_1 - β a_0)`.
pub fn recursive_growth_bound<T>(a: &[T], alpha: &T, beta: &T, gamma: &T) -> GrowthVerdict<T>
where
    T: Num + PartialOrd + Clone,
{
    let zero = T::zero();
    let fail = GrowthVerdict { holds: false, certified_lower: None };
    if a.len() < 3 || *alpha < zero || *gamma < alpha.clone() + beta.clone() {
        return fail;
    }
    if a.iter().any(|x| *x < zero) || a[1] <= beta.clone() * a[0].clone() {
        return fail;
    }
    let ab = alpha.clone() * beta.clone();
    let ok = a
        .windows(3)
        .all(|w| w[2].clone() + ab.clone() * w[0].clone() >= gamma.clone() * w[1].clone());
    if ok {
        GrowthVerdict { holds: true, certified_lower: Some(alpha.clone()) }
    } else {
        fail
    }
}
