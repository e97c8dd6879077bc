from apps.training.checkpoint import Checkpoint
from apps.training.checkpoint import load_checkpoint
from apps.training.checkpoint import restore_model
from apps.training.checkpoint import save_checkpoint
from apps.training.loss import mse_loss
from apps.training.optimizer import Adam
from apps.training.optimizer import adam_step
from apps.training.optimizer import clip_grad_norm
from apps.training.schedule import lr_recursive
from apps.training.schedule import lr_schedule
from apps.training.trainer import TrainResult
from apps.training.trainer import train
