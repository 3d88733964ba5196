from .circuits import data_path, list_circuits, load_circuit
