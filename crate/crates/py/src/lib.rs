use pyo3::prelude::*;

#[pymodule]
fn qcompass_py(_py: Python, _m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
