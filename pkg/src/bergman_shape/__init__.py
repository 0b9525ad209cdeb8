# Bergman Shape Recovery - planar domains from complex area moments
