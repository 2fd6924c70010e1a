use pyo3::ffi::c_str;
use pyo3::prelude::*;

use hallcalc::hallcalc as module;

#[test]
fn module_from_python() {
    pyo3::append_to_inittab!(module);
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import hallcalc
from fractions import Fraction

assert hallcalc.macmahon(6) == [1, 1, 3, 6, 13, 24, 48]
assert hallcalc.dt_zero(1, 2) == [1, -1, 3]

r = hallcalc.rational_from_periodic(3, ["1", "2", "2"])
assert r["table_symmetric"] and r["invariant"]
assert hallcalc.symmetry_check(r["numer"], r["denom"])
assert not hallcalc.symmetry_check({0: 1}, {0: 1, 1: -1})

m = hallcalc.Model.jordan(2, 3)
assert m.q == 2
assert len(m.classes()) == 7
ints = m.integrate("one")
assert ints[((), 0)] == Fraction(1)

rep = hallcalc.verify("hilbert", m.spec_json())
assert rep.passed and rep.witness() is None
assert rep.summary() == "hilbert: pass"
assert set(hallcalc.identities()) >= {"hilbert", "duality", "hn"}

code, out, err = hallcalc.run_cli(["series", "macmahon", "--order", "2"])
assert code == 0 and out == "exponent,coefficient\n0,1\n1,1\n2,3\n"
try:
    hallcalc.Model.from_json('{"type": "jordan"}')
    raise AssertionError("bad spec accepted")
except ValueError:
    pass
"#
            ),
            None,
            None,
        )
        .map_err(|e| {
            e.display(py);
            e
        })
        .unwrap();
    });
}
