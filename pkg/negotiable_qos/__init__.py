VERSION = "V0.2"
