//! Perceptual fusion of the two prior dehazers.
