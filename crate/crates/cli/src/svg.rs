//! Self-contained SVG scatter plot of spectra in the complex plane, with
//! the unit circle and the left-shifted unit disk as reference curves.

const SIZE: f64 = 480.0;
const RANGE: f64 = 2.5;

fn x(re: f64) -> f64 {
    (re + RANGE) / (2.0 * RANGE) * SIZE
}

fn y(im: f64) -> f64 {
    (RANGE - im) / (2.0 * RANGE) * SIZE
}

/// Plot the eigenvalues of S (circles on the unit circle's scale) and of
/// -L (crosses, relative to the disk centered at -1). Axes span [-2.5, 2.5].
pub fn spectrum_scatter(stochastic: &[(f64, f64)], negated_laplacian: &[(f64, f64)]) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" \
         viewBox=\"0 0 {s} {s}\">\n",
        s = SIZE
    ));
    svg.push_str(&format!(
        "<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n",
        s = SIZE
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"0\" y1=\"{c}\" x2=\"{s}\" y2=\"{c}\" stroke=\"#999\" stroke-width=\"1\"/>\n",
        c = y(0.0),
        s = SIZE
    ));
    svg.push_str(&format!(
        "<line x1=\"{c}\" y1=\"0\" x2=\"{c}\" y2=\"{s}\" stroke=\"#999\" stroke-width=\"1\"/>\n",
        c = x(0.0),
        s = SIZE
    ));
    let radius = SIZE / (2.0 * RANGE);
    // Unit circle (eigenvalues of S live inside it).
    svg.push_str(&format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"none\" stroke=\"#4477aa\" \
         stroke-dasharray=\"4 3\"/>\n",
        x(0.0),
        y(0.0)
    ));
    // Shifted disk centered at -1 (eigenvalues of -L = S - I live inside it).
    svg.push_str(&format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"none\" stroke=\"#cc6677\" \
         stroke-dasharray=\"4 3\"/>\n",
        x(-1.0),
        y(0.0)
    ));
    for &(re, im) in stochastic {
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"#4477aa\"/>\n",
            x(re),
            y(im)
        ));
    }
    for &(re, im) in negated_laplacian {
        let (cx, cy) = (x(re), y(im));
        svg.push_str(&format!(
            "<path d=\"M {x0:.3} {y0:.3} L {x1:.3} {y1:.3} M {x0:.3} {y1:.3} L {x1:.3} {y0:.3}\" \
             stroke=\"#cc6677\" stroke-width=\"2\"/>\n",
            x0 = cx - 4.0,
            y0 = cy - 4.0,
            x1 = cx + 4.0,
            y1 = cy + 4.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_a_complete_svg_document() {
        let svg = spectrum_scatter(&[(1.0, 0.0), (-0.5, 0.8)], &[(0.0, 0.0)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("href"), "self-contained, no external assets");
    }
}
