# -*- coding: utf-8 -*-
from extensions.command_manager import Command
from apps.evaluation.controller.evaluation_controller import eval_command
from apps.evaluation.controller.evaluation_controller import predict_command

commandpatterns = [
    Command(predict_command, name='predict'),
    Command(eval_command, name='eval'),
]
