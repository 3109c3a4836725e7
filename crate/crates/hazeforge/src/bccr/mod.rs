//! Boundary constraint + contextual regularization dehazer.
